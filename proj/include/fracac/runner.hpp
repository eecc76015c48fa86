#pragma once

#include <map>
#include <string>
#include <vector>

namespace fracac {

/// Flat key/value configuration. Keys are checked against the known set on
/// every assignment, so a typo fails at load time.
struct RunConfig {
  std::string experiment = "layer";
  int n = 1;
  double s = 0.5;
  double h = 0.05;
  double box_radius = 40.0;
  std::string potential = "quartic";
  double epsilon = 1.0;
  std::vector<double> epsilon_list{0.1, 0.05, 0.025, 0.0125, 0.00625};
  std::vector<double> radii;
  std::string scheme = "newton";
  int max_iterations = 20000;
  double tol = 1e-10;
  unsigned seed = 12345;
  int fields = 20;
  std::string output_dir = "fracac_out";
  std::vector<std::string> inputs;  // report: directories holding report.json
  bool svg = true;

  /// Throws ConfigError naming the key on unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);
  /// Defaults of each experiment (grids sized for its acceptance run).
  static RunConfig defaults(const std::string& experiment);
  /// `key = value` lines; `#` starts a comment. The file's experiment key (if
  /// any) selects the defaults the other keys override.
  static RunConfig from_file(const std::string& path);
  /// Applies the keys of a config file on top of this one.
  void apply_file(const std::string& path);
  /// Re-checks the preconditions of the modules the experiment uses.
  void validate() const;
  /// Sorted key=value echo.
  std::map<std::string, std::string> echo() const;
};

const std::vector<std::string>& experiment_names();

struct CheckResult {
  std::string name;
  std::string criterion;  // acceptance criterion number, or "" for diagnostics
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string relation;  // "<=", ">=", "within", "report"
  bool pass = true;
};

struct RunReport {
  std::vector<std::string> experiments;
  std::map<std::string, std::string> config;
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;  // written to timing.json only

  bool pass() const;
  /// Deterministic JSON (no timing).
  std::string to_json() const;
  static RunReport from_json(const std::string& text);
};

/// Runs one experiment pipeline and writes its files under
/// output_dir/experiment: CSV traces, field files, report.json, timing.json
/// and SVG plots. Throws ConfigError (bad config) or NumericalError.
RunReport run(const RunConfig& config);

/// Concatenation of disjoint reports; throws ConfigError on an experiment id
/// collision. An empty list gives an empty passing report with a warning.
RunReport report_merge(const std::vector<RunReport>& reports);

/// Minimal SVG line chart of y against x (log axes optional).
std::string svg_line_chart(const std::string& title, const std::vector<double>& x, const std::vector<double>& y,
                           bool log_x = false, bool log_y = false);

}  // namespace fracac
