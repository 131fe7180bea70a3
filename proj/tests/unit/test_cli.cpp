#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <gnk/builtin.hpp>

#include "experiment.hpp"

using namespace gnk;
using namespace gnk::cli;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

Domain domain_from(const std::string& text) {
  std::istringstream in(text);
  return parse_domain(in, "test.dom");
}

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gnk-cli-test-" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("defaults follow the reference solver settings") {
  const auto c = parse("");
  CHECK(c.gmres.restart == 25);
  CHECK(c.gmres.tol == 1e-12);
  CHECK(c.gmres.maxit == 40);
  CHECK(c.iprec == 4);
  CHECK(c.subtraction);
}

TEST_CASE("config values are parsed") {
  const auto c = parse(
      "# comment\n"
      "problem = adjoint\n"
      "domain = example2-bounded-5\n"
      "eps = 1e-1, 1e-2\n"
      "n = 64 128  # trailing comment\n"
      "theta = pi/2 0 pi/2 0 -2*pi/4\n"
      "gamma = trig\n"
      "gamma_trig = 1 0.5 0; 3 0 -1\n"
      "restart = 10\n"
      "tol = 1e-10\n"
      "maxit = 7\n"
      "iprec = 3\n"
      "subtraction = off\n"
      "targets = 0.1, 0.2; -0.3\n");
  CHECK(c.problem == ProblemKind::Adjoint);
  CHECK(c.eps == std::vector<double>{1e-1, 1e-2});
  CHECK(c.n == std::vector<int>{64, 128});
  REQUIRE(c.theta.size() == 5);
  CHECK(c.theta[0] == doctest::Approx(kPi / 2));
  CHECK(c.theta[4] == doctest::Approx(-kPi / 2));
  CHECK(c.gamma_trig.size() == 6);
  CHECK(c.gmres.restart == 10);
  CHECK(c.gmres.tol == 1e-10);
  CHECK(c.iprec == 3);
  CHECK_FALSE(c.subtraction);
  REQUIRE(c.targets.size() == 2);
  CHECK(c.targets[1] == Complex(-0.3, 0.0));
}

TEST_CASE("invalid configs name the line and key") {
  CHECK(error_of([] { parse("n = 64\nspeed = 3\n"); }).find("test.cfg:2: speed: unknown key") !=
        std::string::npos);
  CHECK(error_of([] { parse("n = 63\n"); }).find("n:") != std::string::npos);
  CHECK(error_of([] { parse("iprec = 9\n"); }).find("iprec") != std::string::npos);
  CHECK(error_of([] { parse("tol = abc\n"); }).find("tol") != std::string::npos);
  CHECK(error_of([] { parse("n = 8\nn = 16\n"); }).find("twice") != std::string::npos);
  CHECK(error_of([] { parse("restart\n"); }).find("key = value") != std::string::npos);
  CHECK(error_of([] { parse("gamma = trig\n"); }).find("gamma_trig") != std::string::npos);
}

TEST_CASE("domain files") {
  const auto d = domain_from(
      "kind = bounded\n"
      "alpha = 0, 0\n"
      "circle center = 0, 0 radius = 1 orientation = ccw\n"
      "circle center = 0.5, 0 radius = 0.25 orientation = cw\n"
      "ellipse center = -0.5, 0 a = 0.2 b = 0.1 angle = pi/4 orientation = cw\n");
  CHECK(d.is_bounded());
  CHECK(d.component_count() == 3);
  const auto disc = discretize(d, 16);
  CHECK(std::abs(disc.eta[16] - Complex(0.75, 0.0)) < 1e-15);

  const auto sq = domain_from(
      "kind = bounded\nalpha = 0, 0\npolygon vertices = 1,-1; 1,1; -1,1; -1,-1 grading = 3\n");
  CHECK(sq.curve(0).corner_count() == 4);

  const auto tr = domain_from("kind = unbounded\ntrig min_mode = -1 coeffs = 1, 0; 0, 0; 0, 0\n");
  CHECK(tr.component_count() == 1);
}

TEST_CASE("malformed domain files name the offending field") {
  const auto msg = error_of([] {
    domain_from("kind = bounded\nalpha = 0, 0\ncircle center = 0, 0 radius = big orientation = ccw\n");
  });
  CHECK(msg.find("test.dom:3") != std::string::npos);
  CHECK(msg.find("'radius'") != std::string::npos);
  CHECK(error_of([] { domain_from("kind = bounded\ncircle center = 0,0 radius = 1 orientation = ccw\n"); })
            .find("'alpha'") != std::string::npos);
  CHECK(error_of([] { domain_from("kind = round\n"); }).find("'kind'") != std::string::npos);
  CHECK(error_of([] { domain_from("kind = unbounded\ncircle center = 0,0 radius = 1 orientation = cw colour = red\n"); })
            .find("'colour'") != std::string::npos);
  CHECK(error_of([] { domain_from("kind = unbounded\nblob size = 3\n"); }).find("blob") !=
        std::string::npos);
  CHECK(error_of([] { domain_from("kind = unbounded\ncircle center = 0,0 orientation = cw\n"); })
            .find("missing field 'radius'") != std::string::npos);
}

TEST_CASE("geometry output for the unit circle") {
  auto c = parse("domain = unit-disc\nn = 4\n");
  c.out = scratch("geometry").string();
  REQUIRE(emit_geometry(c, std::cerr).exit_code == 0);
  const auto rows = read_csv(fs::path(c.out) / "geometry.csv");
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"t", "re_eta", "im_eta", "component"});
  const double expected[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::stod(rows[i + 1][1]) == doctest::Approx(expected[i][0]));
    CHECK(std::stod(rows[i + 1][2]) == doctest::Approx(expected[i][1]));
    CHECK(rows[i + 1][3] == "0");
  }
  CHECK(fs::exists(fs::path(c.out) / "manifest.txt"));
}

TEST_CASE("sweeps write a fixed schema and are reproducible") {
  auto c = parse("domain = example1-desk\nn = 16 32\nwarmup = 0\n");
  c.out = scratch("sweep-a").string();
  REQUIRE(run_experiment(c, std::cerr).exit_code == 0);
  auto c2 = c;
  c2.out = scratch("sweep-b").string();
  c2.threads = 2;
  REQUIRE(run_experiment(c2, std::cerr).exit_code == 0);
  const auto a = read_csv(fs::path(c.out) / "results.csv");
  const auto b = read_csv(fs::path(c2.out) / "results.csv");
  REQUIRE(a.size() == 3);
  CHECK(a[0] == sweep_columns());
  REQUIRE(b.size() == a.size());
  for (std::size_t r = 1; r < a.size(); ++r)
    for (std::size_t k = 0; k < a[r].size(); ++k)
      if (a[0][k].rfind("time_", 0) != 0) CHECK(a[r][k] == b[r][k]);
  CHECK(std::stod(a[2][3]) < std::stod(a[1][3]));
}

TEST_CASE("failed cells keep their row with a marker") {
  auto c = parse("domain = example1-desk\nn = 16\ntheta = 0 1\nwarmup = 0\n");
  c.out = scratch("failed").string();
  const auto r = run_experiment(c, std::cerr);
  CHECK(r.exit_code != 0);
  const auto rows = read_csv(fs::path(c.out) / "results.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].back().rfind("failed:", 0) == 0);
}

TEST_CASE("built-in geometries by name") {
  for (const char* name : {"example1-desk", "example1-desk-unbounded", "example2-bounded-5",
                           "example4-unbounded-5", "square-with-grading", "unit-disc"}) {
    auto c = parse(std::string("domain = ") + name + "\n");
    CHECK_NOTHROW(resolve_domain(c, 1e-1));
  }
  auto bad = parse("domain = teapot\n");
  CHECK_THROWS_AS(resolve_domain(bad, 0.1), Error);
}
