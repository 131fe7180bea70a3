#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <gnk/builtin.hpp>

#ifndef GNK_VERSION
#define GNK_VERSION "unknown"
#endif

namespace gnk::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (seps.find(c) != std::string::npos) {
      if (!trim(cur).empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw Error("expected a number, got an empty value");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v))
    throw Error("'" + t + "' is not a finite number");
  return v;
}

long long parse_integer(const std::string& text) {
  const std::string t = trim(text);
  char* end = nullptr;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) throw Error("'" + t + "' is not an integer");
  return v;
}

int parse_int(const std::string& text) {
  const long long v = parse_integer(text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw Error("'" + trim(text) + "' is out of range");
  return static_cast<int>(v);
}

/// Products and quotients of numbers and `pi`, with an optional leading sign.
double parse_angle(const std::string& text) {
  std::string t = trim(lower(text));
  double sign = 1.0;
  if (!t.empty() && (t[0] == '-' || t[0] == '+')) {
    if (t[0] == '-') sign = -1.0;
    t = trim(t.substr(1));
  }
  if (t.empty()) throw Error("empty angle");
  double value = 1.0;
  char op = '*';
  std::string factor;
  auto apply = [&] {
    const std::string f = trim(factor);
    const double v = (f == "pi") ? kPi : parse_double(f);
    if (op == '*') {
      value *= v;
    } else {
      if (v == 0.0) throw Error("division by zero in '" + text + "'");
      value /= v;
    }
    factor.clear();
  };
  for (char c : t) {
    if (c == '*' || c == '/') {
      apply();
      op = c;
    } else {
      factor += c;
    }
  }
  apply();
  return sign * value;
}

bool parse_bool(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "on" || t == "true" || t == "yes" || t == "1") return true;
  if (t == "off" || t == "false" || t == "no" || t == "0") return false;
  throw Error("'" + text + "' is not on/off");
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  return os.str();
}

std::string problem_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::Gnk: return "gnk";
    case ProblemKind::Adjoint: return "adjoint";
    case ProblemKind::Cauchy: return "cauchy";
    case ProblemKind::Benchmark: return "benchmark";
    case ProblemKind::Geometry: return "geometry";
  }
  return "?";
}

}  // namespace

Complex parse_complex(const std::string& text) {
  const auto parts = split(text, ",");
  if (parts.size() == 1) return {parse_double(parts[0]), 0.0};
  if (parts.size() == 2) return {parse_double(parts[0]), parse_double(parts[1])};
  throw Error("'" + trim(text) + "' is not a point 'x, y'");
}

// ---------------------------------------------------------------------------
// Configuration

std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved() const {
  std::ostringstream th, tg, tr;
  th << (theta.empty() ? "auto" : join(theta));
  for (std::size_t i = 0; i + 2 < gamma_trig.size(); i += 3)
    tg << (i ? "; " : "") << gamma_trig[i] << " " << gamma_trig[i + 1] << " " << gamma_trig[i + 2];
  for (std::size_t i = 0; i < targets.size(); ++i)
    tr << (i ? "; " : "") << targets[i].real() << ", " << targets[i].imag();
  std::ostringstream tol;
  tol << gmres.tol;
  return {
      {"problem", problem_name(problem)},
      {"domain", domain_file.empty() ? domain : ""},
      {"domain_file", domain_file},
      {"circles", std::to_string(circles)},
      {"grading", std::to_string(grading)},
      {"eps", join(eps)},
      {"n", join(n)},
      {"theta", th.str()},
      {"gamma", gamma},
      {"gamma_value", fmt(gamma_value)},
      {"gamma_trig", tg.str()},
      {"restart", std::to_string(gmres.restart)},
      {"tol", tol.str()},
      {"maxit", std::to_string(gmres.maxit)},
      {"iprec", std::to_string(iprec)},
      {"subtraction", subtraction ? "on" : "off"},
      {"targets", tr.str()},
      {"bench_sizes", join(bench_sizes)},
      {"bench_repeats", std::to_string(bench_repeats)},
      {"warmup", std::to_string(warmup)},
      {"threads", std::to_string(threads)},
      {"seed", std::to_string(seed)},
      {"out", out},
  };
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw Error(where + ": expected 'key = value'");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw Error(where + ": key '" + key + "' given twice");
    try {
      if (key == "problem") {
        const std::string v = lower(value);
        if (v == "gnk" || v == "solve") c.problem = ProblemKind::Gnk;
        else if (v == "adjoint") c.problem = ProblemKind::Adjoint;
        else if (v == "cauchy") c.problem = ProblemKind::Cauchy;
        else if (v == "benchmark" || v == "bench") c.problem = ProblemKind::Benchmark;
        else if (v == "geometry") c.problem = ProblemKind::Geometry;
        else throw Error("unknown problem '" + value + "'");
      } else if (key == "domain") {
        c.domain = value;
      } else if (key == "domain_file") {
        fs::path p(value);
        if (p.is_relative() && source.front() != '<') p = fs::path(source).parent_path() / p;
        c.domain_file = p.string();
      } else if (key == "circles") {
        c.circles = parse_int(value);
      } else if (key == "grading") {
        c.grading = parse_int(value);
      } else if (key == "eps") {
        c.eps.clear();
        for (const auto& t : split(value, " ,")) c.eps.push_back(parse_double(t));
      } else if (key == "n") {
        c.n.clear();
        for (const auto& t : split(value, " ,")) c.n.push_back(parse_int(t));
      } else if (key == "theta") {
        c.theta.clear();
        if (lower(value) != "auto")
          for (const auto& t : split(value, " ,")) c.theta.push_back(parse_angle(t));
      } else if (key == "gamma") {
        const std::string v = lower(value);
        if (v != "auto" && v != "example1-bounded" && v != "example1-unbounded" &&
            v != "constant" && v != "trig")
          throw Error("unknown gamma '" + value + "'");
        c.gamma = v;
      } else if (key == "gamma_value") {
        c.gamma_value = parse_double(value);
      } else if (key == "gamma_trig") {
        c.gamma_trig.clear();
        for (const auto& mode : split(value, ";")) {
          const auto f = split(mode, " ,");
          if (f.size() != 3) throw Error("each mode needs 'k a b'");
          c.gamma_trig.push_back(parse_int(f[0]));
          c.gamma_trig.push_back(parse_double(f[1]));
          c.gamma_trig.push_back(parse_double(f[2]));
        }
      } else if (key == "restart") {
        c.gmres.restart = parse_int(value);
      } else if (key == "tol") {
        c.gmres.tol = parse_double(value);
      } else if (key == "maxit") {
        c.gmres.maxit = parse_int(value);
      } else if (key == "iprec") {
        c.iprec = parse_int(value);
      } else if (key == "subtraction") {
        c.subtraction = parse_bool(value);
      } else if (key == "targets") {
        c.targets.clear();
        for (const auto& t : split(value, ";")) c.targets.push_back(parse_complex(t));
      } else if (key == "bench_sizes") {
        c.bench_sizes.clear();
        for (const auto& t : split(value, " ,")) c.bench_sizes.push_back(parse_int(t));
      } else if (key == "bench_repeats") {
        c.bench_repeats = parse_int(value);
      } else if (key == "warmup") {
        c.warmup = parse_int(value);
      } else if (key == "threads") {
        c.threads = parse_int(value);
      } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_integer(value));
      } else if (key == "out") {
        c.out = value;
      } else {
        throw Error("unknown key");
      }
    } catch (const Error& e) {
      throw Error(where + ": " + key + ": " + e.what());
    }
  }

  for (int v : c.n)
    if (v < 4 || v % 2 != 0) throw Error(source + ": n: every entry must be even and >= 4");
  if (c.n.empty()) throw Error(source + ": n: at least one value required");
  if (c.iprec < 1 || c.iprec > 5) throw Error(source + ": iprec: must be in 1..5");
  if (c.threads < 1) throw Error(source + ": threads: must be >= 1");
  if (c.bench_repeats < 1) throw Error(source + ": bench_repeats: must be >= 1");
  if (c.warmup < 0) throw Error(source + ": warmup: must be >= 0");
  if (c.gamma == "trig" && c.gamma_trig.empty())
    throw Error(source + ": gamma_trig: required when gamma = trig");
  try {
    c.gmres.validate();
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

// ---------------------------------------------------------------------------
// Domain files

namespace {

/// `name = value` fields of one curve line; values run up to the next name.
std::map<std::string, std::string> curve_fields(const std::string& rest) {
  std::map<std::string, std::string> out;
  std::vector<std::pair<std::size_t, std::string>> names;
  for (std::size_t pos = 0; (pos = rest.find('=', pos)) != std::string::npos; ++pos) {
    std::size_t b = pos;
    while (b > 0 && rest[b - 1] == ' ') --b;
    std::size_t a = b;
    while (a > 0 && (std::isalnum(static_cast<unsigned char>(rest[a - 1])) || rest[a - 1] == '_'))
      --a;
    if (a == b) throw Error("'=' without a field name");
    names.emplace_back(a, rest.substr(a, b - a));
  }
  if (names.empty() && !trim(rest).empty()) throw Error("expected 'field = value' pairs");
  for (std::size_t k = 0; k < names.size(); ++k) {
    const std::size_t start = rest.find('=', names[k].first) + 1;
    const std::size_t end = k + 1 < names.size() ? names[k + 1].first : rest.size();
    const std::string name = lower(names[k].second);
    if (out.count(name)) throw Error("field '" + name + "' given twice");
    out[name] = trim(rest.substr(start, end - start));
  }
  return out;
}

std::string take(std::map<std::string, std::string>& fields, const std::string& name) {
  const auto it = fields.find(name);
  if (it == fields.end()) throw Error("missing field '" + name + "'");
  std::string v = it->second;
  fields.erase(it);
  return v;
}

template <typename F>
auto field(std::map<std::string, std::string>& fields, const std::string& name, F parse) {
  const std::string v = take(fields, name);
  try {
    return parse(v);
  } catch (const Error& e) {
    throw Error("field '" + name + "': " + e.what());
  }
}

Orientation parse_orientation(const std::string& v) {
  const std::string t = lower(v);
  if (t == "ccw" || t == "counterclockwise") return Orientation::Counterclockwise;
  if (t == "cw" || t == "clockwise") return Orientation::Clockwise;
  throw Error("'" + v + "' is not ccw or cw");
}

std::vector<Complex> parse_points(const std::string& v) {
  std::vector<Complex> out;
  for (const auto& p : split(v, ";")) out.push_back(parse_complex(p));
  return out;
}

}  // namespace

Domain parse_domain(std::istream& in, const std::string& source) {
  std::optional<DomainKind> kind;
  std::optional<Complex> alpha;
  std::vector<Curve> curves;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    const auto space = t.find_first_of(" =");
    const std::string head = lower(t.substr(0, space));
    try {
      if (head == "kind" || head == "alpha") {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw Error("expected '" + head + " = value'");
        const std::string value = trim(t.substr(eq + 1));
        if (head == "kind") {
          const std::string v = lower(value);
          if (v == "bounded") kind = DomainKind::Bounded;
          else if (v == "unbounded") kind = DomainKind::Unbounded;
          else throw Error("field 'kind': '" + value + "' is not bounded or unbounded");
        } else {
          try {
            alpha = parse_complex(value);
          } catch (const Error& e) {
            throw Error(std::string("field 'alpha': ") + e.what());
          }
        }
        continue;
      }
      auto f = curve_fields(space == std::string::npos ? "" : t.substr(space));
      if (head == "circle") {
        const Complex c = field(f, "center", parse_complex);
        const double r = field(f, "radius", parse_double);
        const Orientation o = field(f, "orientation", parse_orientation);
        if (!(r > 0)) throw Error("field 'radius': must be positive");
        curves.push_back(Curve::circle(c, r, o));
      } else if (head == "ellipse") {
        const Complex c = field(f, "center", parse_complex);
        const double a = field(f, "a", parse_double);
        const double b = field(f, "b", parse_double);
        const double angle = f.count("angle") ? field(f, "angle", parse_angle) : 0.0;
        const Orientation o = field(f, "orientation", parse_orientation);
        curves.push_back(Curve::ellipse(c, a, b, angle, o));
      } else if (head == "polygon") {
        auto v = field(f, "vertices", parse_points);
        const int p = field(f, "grading", parse_int);
        curves.push_back(Curve::polygon(std::move(v), p));
      } else if (head == "trig") {
        const int k = field(f, "min_mode", parse_int);
        auto coeffs = field(f, "coeffs", parse_points);
        curves.push_back(Curve::trig_series(k, std::move(coeffs)));
      } else {
        throw Error("unknown entry '" + head + "'");
      }
      if (!f.empty()) throw Error("unknown field '" + f.begin()->first + "' for " + head);
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
  }
  if (!kind) throw Error(source + ": missing field 'kind'");
  if (curves.empty()) throw Error(source + ": no curves given");
  try {
    if (*kind == DomainKind::Bounded) {
      if (!alpha) throw Error("missing field 'alpha' for a bounded domain");
      return Domain::bounded(std::move(curves), *alpha);
    }
    if (alpha) throw Error("field 'alpha' is only allowed for bounded domains");
    return Domain::unbounded(std::move(curves));
  } catch (const Error& e) {
    throw Error(source + ": " + e.what());
  }
}

Domain load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open domain file '" + path + "'");
  return parse_domain(in, path);
}

Domain resolve_domain(const ExperimentConfig& config, double eps) {
  if (!config.domain_file.empty()) return load_domain(config.domain_file);
  const double e = std::isnan(eps) ? 1e-1 : eps;
  return builtin::by_name(config.domain, config.circles, e, config.grading);
}

// ---------------------------------------------------------------------------
// Sweeps

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "n",          "total_nodes", "eps",          "err_mu_inf",    "err_h_inf",
      "E_n",        "gmres_iters", "matvec_count", "time_setup_s",  "time_rhs_s",
      "time_solve_s", "time_h_s",  "converged",    "status"};
  return cols;
}

const std::vector<std::string>& bench_columns() {
  static const std::vector<std::string> cols = {"N",        "iprec",       "order",
                                                "fast_s",   "direct_s",    "fast_ratio",
                                                "direct_ratio", "max_rel_err", "status"};
  return cols;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Row {
  std::vector<std::string> cells;
  bool failed = false;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
  os << "\n";
}

PiecewiseConstant resolve_theta(const ExperimentConfig& c, const Domain& d) {
  const int m1 = d.component_count();
  if (c.theta.empty()) {
    if (d.is_bounded()) return PiecewiseConstant::constant(m1, kPi / 2);
    return PiecewiseConstant{builtin::example1_theta(m1)};
  }
  if (c.theta.size() == 1) return PiecewiseConstant::constant(m1, c.theta[0]);
  if (static_cast<int>(c.theta.size()) != m1)
    throw Error("theta has " + std::to_string(c.theta.size()) + " values but the domain has " +
                std::to_string(m1) + " curves");
  return PiecewiseConstant{c.theta};
}

using AnalyticFn = Complex (*)(Complex);

AnalyticFn example_function(const Domain& d) {
  return d.is_bounded() ? builtin::example1_f_bounded : builtin::example1_f_unbounded;
}

/// gamma samples and, when known, the exact mu.
std::pair<Vector, std::optional<Vector>> resolve_gamma(const ExperimentConfig& c, const Domain& d,
                                                       const DiscreteBoundary& disc,
                                                       const AuxiliaryFunction& aux) {
  std::string g = c.gamma;
  if (g == "auto")
    g = c.problem == ProblemKind::Adjoint ? "constant"
                                          : (d.is_bounded() ? "example1-bounded" : "example1-unbounded");
  const Index size = disc.size();
  if (g == "constant") return {Vector::Constant(size, c.gamma_value), std::nullopt};
  if (g == "trig") {
    Vector v = Vector::Zero(size);
    for (Index i = 0; i < size; ++i)
      for (std::size_t k = 0; k + 2 < c.gamma_trig.size(); k += 3)
        v[i] += c.gamma_trig[k + 1] * std::cos(c.gamma_trig[k] * disc.t[i]) +
                c.gamma_trig[k + 2] * std::sin(c.gamma_trig[k] * disc.t[i]);
    return {v, std::nullopt};
  }
  const AnalyticFn f =
      g == "example1-bounded" ? builtin::example1_f_bounded : builtin::example1_f_unbounded;
  Vector gamma(size), mu(size);
  for (Index i = 0; i < size; ++i) {
    const Complex v = aux.A[i] * f(disc.eta[i]);
    gamma[i] = v.real();
    mu[i] = v.imag();
  }
  return {gamma, mu};
}

std::vector<Complex> default_targets(const ExperimentConfig& c) {
  if (!c.targets.empty()) return c.targets;
  if (!c.domain_file.empty()) throw Error("targets: required for domains read from a file");
  const std::string& name = c.domain;
  if (name == "unit-disc") return {{0.5, 0.1}, {0.99, 0.0}, {0.0, -0.7}};
  if (name == "example1-desk") return {{0.85, 0.0}, {0.0, 0.85}, {0.1, 0.05}};
  if (name == "example1-desk-unbounded") return {{3.0, 0.0}, {0.0, 2.5}, {-4.0, 1.0}};
  if (name == "example2-bounded-5") return {{0.0, 0.0}, {0.9, 0.0}, {0.0, -0.7}};
  if (name == "example4-unbounded-5") return {{3.0, 3.0}, {-5.0, 0.0}, {0.7, 0.0}};
  if (name == "square-with-grading") return {{0.3, 0.2}, {-0.9, 0.9}, {0.0, -0.5}};
  throw Error("targets: no default evaluation points for domain '" + name + "'");
}

struct Cell {
  double eps;
  int n;
};

struct Timings {
  double setup = kNaN, rhs = kNaN, solve = kNaN, h = kNaN;
};

Row run_cell(const ExperimentConfig& c, const Cell& cell, bool record_time) {
  double err_mu = kNaN, err_h = kNaN, En = kNaN;
  int iters = 0;
  std::size_t matvecs = 0;
  bool converged = false;
  Timings tm;
  const Domain dom = resolve_domain(c, cell.eps);
  const PiecewiseConstant theta = resolve_theta(c, dom);
  SolverOptions opts;
  opts.iprec = c.iprec;
  opts.gmres = c.gmres;
  opts.subtraction = c.subtraction;
  Index nodes = 0;

  auto t0 = Clock::now();
  if (c.problem == ProblemKind::Gnk) {
    const DiscreteBoundary disc0 = discretize(dom, cell.n);
    const AuxiliaryFunction aux0 = build_A(dom, disc0, theta);
    auto [gamma, mu_exact] = resolve_gamma(c, dom, disc0, aux0);
    t0 = Clock::now();
    const GnkProblem p = make_gnk_problem(dom, cell.n, theta, gamma, opts);
    tm.setup = seconds_since(t0);
    t0 = Clock::now();
    const Vector y = assemble_rhs_y(p);
    tm.rhs = seconds_since(t0);
    t0 = Clock::now();
    const SolveReport rep =
        gmres_solve([&](const Vector& x) { return matvec_fB(p, x); }, -y, p.options.gmres);
    tm.solve = seconds_since(t0);
    t0 = Clock::now();
    const Vector h = compute_h(p, rep.solution);
    tm.h = seconds_since(t0);
    nodes = p.ops->size();
    iters = rep.iterations;
    converged = rep.converged;
    matvecs = p.ops->plan().matvec_count();
    if (mu_exact) {
      err_mu = (rep.solution - *mu_exact).cwiseAbs().maxCoeff();
      err_h = h.cwiseAbs().maxCoeff();
    }
  } else if (c.problem == ProblemKind::Adjoint) {
    const DiscreteBoundary disc0 = discretize(dom, cell.n);
    const AuxiliaryFunction aux0 = build_A(dom, disc0, theta);
    auto [rhs, unused] = resolve_gamma(c, dom, disc0, aux0);
    t0 = Clock::now();
    const AdjointProblem p = make_adjoint_problem(dom, cell.n, theta, rhs, opts);
    tm.setup = seconds_since(t0);
    t0 = Clock::now();
    const AdjointSolution sol = solve_adjoint(p);
    tm.solve = seconds_since(t0);
    nodes = p.ops->size();
    iters = sol.report.iterations;
    converged = sol.report.converged;
    matvecs = p.ops->plan().matvec_count();
    // Orthogonality against admissible data Re[A f] for the matching test function.
    const AnalyticFn f = example_function(dom);
    Vector g(nodes);
    for (Index i = 0; i < nodes; ++i) g[i] = (p.ops->aux().A[i] * f(disc0.eta[i])).real();
    En = orthogonality_defect(g, sol.phi, cell.n);
  } else {  // Cauchy
    const std::vector<Complex> tv = default_targets(c);
    const CVector targets = Eigen::Map<const CVector>(tv.data(), static_cast<Index>(tv.size()));
    const AnalyticFn f = example_function(dom);
    const DiscreteBoundary disc = discretize(dom, cell.n);
    CVector values(disc.size());
    for (Index i = 0; i < disc.size(); ++i)
      values[i] = c.gamma == "constant" ? Complex(c.gamma_value) : f(disc.eta[i]);
    t0 = Clock::now();
    const FastSumPlan plan(disc.eta, c.iprec);
    tm.setup = seconds_since(t0);
    t0 = Clock::now();
    const CVector got = cauchy_eval(disc, plan, values, targets, dom.kind(), 0.0);
    tm.solve = seconds_since(t0);
    nodes = disc.size();
    matvecs = plan.matvec_count();
    converged = true;
    err_mu = 0.0;
    for (Index k = 0; k < targets.size(); ++k) {
      const Complex exact = c.gamma == "constant" ? Complex(c.gamma_value) : f(targets[k]);
      err_mu = std::max(err_mu, std::abs(got[k] - exact));
    }
  }

  auto timed = [&](double v) { return record_time ? fmt(v) : std::string(); };
  Row row;
  row.cells = {std::to_string(cell.n),
               std::to_string(nodes),
               fmt(cell.eps),
               fmt(err_mu),
               fmt(err_h),
               fmt(En),
               std::to_string(iters),
               std::to_string(matvecs),
               timed(tm.setup),
               timed(tm.rhs),
               timed(tm.solve),
               timed(tm.h),
               converged ? "1" : "0",
               converged ? "ok" : "not-converged"};
  return row;
}

Row failed_row(const Cell& cell, const std::string& message) {
  Row r;
  r.failed = true;
  r.cells.assign(sweep_columns().size(), "");
  r.cells[0] = std::to_string(cell.n);
  r.cells[2] = fmt(cell.eps);
  r.cells[12] = "0";
  r.cells.back() = "failed: " + message;
  return r;
}

void write_manifest(const ExperimentConfig& c, const fs::path& dir, const std::string& csv_name) {
  std::ofstream m(dir / "manifest.txt");
  m << "# gnk run manifest\n";
  m << "version = " << GNK_VERSION << "\n";
  m << "results = " << csv_name << "\n";
  for (const auto& [k, v] : c.resolved()) m << k << " = " << v << "\n";
}

RunResult run_sweep(const ExperimentConfig& c, std::ostream& log) {
  std::vector<Cell> cells;
  const std::vector<double> eps = c.eps.empty() ? std::vector<double>{kNaN} : c.eps;
  for (double e : eps)
    for (int n : c.n) cells.push_back({e, n});

  std::vector<Row> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cells.size();) {
      try {
        for (int w = 0; w < c.warmup; ++w) run_cell(c, cells[i], false);
        rows[i] = run_cell(c, cells[i], true);
      } catch (const std::exception& e) {
        rows[i] = failed_row(cells[i], e.what());
      }
      std::lock_guard<std::mutex> lock(log_mutex);
      log << "n=" << cells[i].n << (std::isnan(cells[i].eps) ? "" : " eps=" + fmt(cells[i].eps))
          << ": " << rows[i].cells.back() << "\n";
    }
  };
  const int threads = std::min<int>(c.threads, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  const fs::path dir(c.out);
  fs::create_directories(dir);
  std::ofstream csv(dir / "results.csv");
  write_row(csv, sweep_columns());
  int failures = 0;
  for (const auto& r : rows) {
    write_row(csv, r.cells);
    failures += r.failed;
  }
  write_manifest(c, dir, "results.csv");
  if (failures > 0)
    return {1, std::to_string(failures) + " of " + std::to_string(rows.size()) + " cells failed"};
  return {0, "wrote " + (dir / "results.csv").string()};
}

RunResult run_bench(const ExperimentConfig& c, std::ostream& log) {
  const fs::path dir(c.out);
  fs::create_directories(dir);
  std::ofstream csv(dir / "results.csv");
  write_row(csv, bench_columns());
  write_manifest(c, dir, "results.csv");
  double prev_fast = kNaN, prev_direct = kNaN;
  int failures = 0;
  for (int N : c.bench_sizes) {
    std::vector<std::string> row(bench_columns().size());
    row[0] = std::to_string(N);
    row[1] = std::to_string(c.iprec);
    try {
      std::mt19937_64 rng(c.seed + static_cast<std::uint64_t>(N));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      std::normal_distribution<double> g;
      CVector z(N), x(N);
      for (auto& v : z) v = {u(rng), u(rng)};
      for (auto& v : x) v = {g(rng), g(rng)};
      FastSumOptions fo;
      fo.force_fast = true;
      const FastSumPlan plan(z, c.iprec, fo);
      CVector fast;
      for (int w = 0; w < c.warmup; ++w) fast = plan.e_matvec(x);
      double tf = 0.0;
      for (int r = 0; r < c.bench_repeats; ++r) {
        const auto t0 = Clock::now();
        fast = plan.e_matvec(x);
        tf += seconds_since(t0);
      }
      tf /= c.bench_repeats;
      const auto t0 = Clock::now();
      const CVector ref = direct_e_matvec(z, x);
      const double td = seconds_since(t0);
      const double err = (fast - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
      row[2] = std::to_string(plan.expansion_order());
      row[3] = fmt(tf);
      row[4] = fmt(td);
      row[5] = fmt(tf / prev_fast);
      row[6] = fmt(td / prev_direct);
      row[7] = fmt(err);
      row[8] = err <= plan.tolerance() ? "ok" : "tolerance-exceeded";
      prev_fast = tf;
      prev_direct = td;
    } catch (const std::exception& e) {
      row[8] = std::string("failed: ") + e.what();
      ++failures;
    }
    log << "N=" << N << ": " << row[8] << "\n";
    write_row(csv, row);
    csv.flush();
  }
  if (failures > 0) return {1, std::to_string(failures) + " benchmark sizes failed"};
  return {0, "wrote " + (dir / "results.csv").string()};
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, std::ostream& log) {
  switch (config.problem) {
    case ProblemKind::Benchmark: return run_bench(config, log);
    case ProblemKind::Geometry: return emit_geometry(config, log);
    default: return run_sweep(config, log);
  }
}

RunResult emit_geometry(const ExperimentConfig& config, std::ostream& log) {
  const double eps = config.eps.empty() ? kNaN : config.eps.front();
  const Domain dom = resolve_domain(config, eps);
  const int n = config.n.front();
  const DiscreteBoundary d = discretize(dom, n);
  const fs::path dir(config.out);
  fs::create_directories(dir);
  std::ofstream csv(dir / "geometry.csv");
  csv << std::setprecision(17);
  csv << "t,re_eta,im_eta,component\n";
  for (Index i = 0; i < d.size(); ++i)
    csv << d.t[i] << "," << d.eta[i].real() << "," << d.eta[i].imag() << ","
        << d.component_of(i) << "\n";
  write_manifest(config, dir, "geometry.csv");
  log << "wrote " << d.size() << " nodes\n";
  return {0, "wrote " + (dir / "geometry.csv").string()};
}

}  // namespace gnk::cli
