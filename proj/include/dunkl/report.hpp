#pragma once

// Experiment reports: one CSV row per case plus a plain-text summary.

#include <cmath>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace dunkl {

struct ReportRow {
  std::string case_id;
  std::vector<std::string> params;  // one entry per ExperimentReport::param_columns
  std::string quantity;
  double value = 0.0;
  double fitted_constant = std::numeric_limits<double>::quiet_NaN();  // empty cell when NaN
  std::string status = "ok";
};

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;  // names the offending or maximizing case
};

struct ExperimentReport {
  std::string experiment;
  std::vector<std::string> param_columns;
  std::vector<ReportRow> rows;
  std::vector<Assertion> assertions;
  std::vector<std::string> summary;
  double wall_clock_seconds = 0.0;
  std::string config_echo;

  bool passed() const;
  void add_row(std::string case_id, std::vector<std::string> params, std::string quantity, double value,
               double fitted = std::numeric_limits<double>::quiet_NaN(), std::string status = "ok");
  void check(std::string name, bool ok, std::string detail);
};

/// Shortest round-trip decimal for a double.
std::string format_number(double v);

/// Header `case_id, <param columns>, quantity, value, fitted_constant, status`.
/// Contains no timing, so equal inputs give byte-identical files.
void write_csv(std::ostream& os, const ExperimentReport& r);
void write_summary(std::ostream& os, const ExperimentReport& r);

/// Writes <dir>/<experiment>.csv and <dir>/<experiment>_summary.txt via
/// temporary files renamed into place. Returns the two paths.
std::pair<std::string, std::string> write_report_files(const std::string& dir, const ExperimentReport& r);

}  // namespace dunkl
