#pragma once

// Experiment configuration, domain files and the sweep runners behind the
// gnk command-line tool.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gnk/bie.hpp>

namespace gnk::cli {

enum class ProblemKind { Gnk, Adjoint, Cauchy, Benchmark, Geometry };

struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Gnk;
  /// Built-in geometry name, or empty when domain_file is used.
  std::string domain = "example1-desk";
  std::string domain_file;
  int circles = 3;
  int grading = 3;
  /// Swept values of eps for the close-boundary geometries; one NaN entry otherwise.
  std::vector<double> eps;
  std::vector<int> n = {32, 64, 128, 256};
  /// Empty selects the Example 1 rule; one value is broadcast to every curve.
  std::vector<double> theta;
  std::string gamma = "auto";
  double gamma_value = 1.0;
  /// Per-mode triples (k, a_k, b_k) of a_k cos(kt) + b_k sin(kt).
  std::vector<double> gamma_trig;
  GmresConfig gmres{};
  int iprec = 4;
  bool subtraction = true;
  /// Cauchy evaluation points; empty picks a fixed set per geometry.
  std::vector<Complex> targets;
  std::vector<int> bench_sizes = {4096, 8192, 16384, 32768, 65536};
  int bench_repeats = 5;
  int warmup = 1;
  int threads = 1;
  std::uint64_t seed = 12345;
  std::string out = "gnk-out";

  /// Every key with its resolved value, in a stable order.
  std::vector<std::pair<std::string, std::string>> resolved() const;
};

/// Parses `key = value` lines; `#` starts a comment. Unknown keys, malformed
/// values and repeated keys raise gnk::Error naming the line and the key.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Domain file:
///   kind = bounded | unbounded
///   alpha = x, y                       (bounded only)
///   circle center = x, y  radius = r  orientation = ccw | cw
///   ellipse center = x, y  a = .  b = .  angle = .  orientation = ccw | cw
///   polygon vertices = x, y; x, y; ...  grading = p
///   trig min_mode = k  coeffs = re, im; re, im; ...
Domain parse_domain(std::istream& in, const std::string& source = "<domain>");
Domain load_domain(const std::string& path);

/// Resolves the configured geometry for one eps value.
Domain resolve_domain(const ExperimentConfig& config, double eps);

/// Fixed CSV header for solve/adjoint/cauchy sweeps.
const std::vector<std::string>& sweep_columns();
const std::vector<std::string>& bench_columns();

struct RunResult {
  int exit_code = 0;
  std::string message;
};

/// Runs the configured experiment and writes results.csv and manifest.txt to
/// config.out. Cells that fail keep their row with the failure in the status column.
RunResult run_experiment(const ExperimentConfig& config, std::ostream& log);

/// Writes t, Re eta, Im eta and the component index of every node of the first n.
RunResult emit_geometry(const ExperimentConfig& config, std::ostream& log);

/// Parses "x, y" or "x" into a complex number; throws gnk::Error.
Complex parse_complex(const std::string& text);

}  // namespace gnk::cli
