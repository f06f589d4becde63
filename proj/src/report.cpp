#include "dunkl/report.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace dunkl {

bool ExperimentReport::passed() const {
  for (const auto& a : assertions)
    if (!a.passed) return false;
  return true;
}

void ExperimentReport::add_row(std::string case_id, std::vector<std::string> params, std::string quantity,
                               double value, double fitted, std::string status) {
  if (params.size() != param_columns.size())
    throw std::logic_error("report row '" + case_id + "' has the wrong number of parameters");
  rows.push_back({std::move(case_id), std::move(params), std::move(quantity), value, fitted, std::move(status)});
}

void ExperimentReport::check(std::string name, bool ok, std::string detail) {
  assertions.push_back({std::move(name), ok, std::move(detail)});
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

void write_csv(std::ostream& os, const ExperimentReport& r) {
  os << "case_id";
  for (const auto& p : r.param_columns) os << ',' << cell(p);
  os << ",quantity,value,fitted_constant,status\n";
  for (const auto& row : r.rows) {
    os << cell(row.case_id);
    for (const auto& p : row.params) os << ',' << cell(p);
    os << ',' << cell(row.quantity) << ',' << format_number(row.value) << ','
       << (std::isnan(row.fitted_constant) ? std::string() : format_number(row.fitted_constant)) << ','
       << cell(row.status) << '\n';
  }
}

void write_summary(std::ostream& os, const ExperimentReport& r) {
  os << "experiment: " << r.experiment << '\n';
  os << "result: " << (r.passed() ? "PASS" : "FAIL") << '\n';
  os << "wall_clock_seconds: " << format_number(r.wall_clock_seconds) << "\n\n";
  os << "assertions:\n";
  for (const auto& a : r.assertions)
    os << "  [" << (a.passed ? "PASS" : "FAIL") << "] " << a.name << ": " << a.detail << '\n';
  if (!r.summary.empty()) {
    os << "\nsummary:\n";
    for (const auto& s : r.summary) os << "  " << s << '\n';
  }
  os << "\nconfig:\n" << r.config_echo;
}

std::pair<std::string, std::string> write_report_files(const std::string& dir, const ExperimentReport& r) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir)) throw std::runtime_error("output path '" + dir + "' is not a writable directory");
  const fs::path csv = fs::path(dir) / (r.experiment + ".csv");
  const fs::path txt = fs::path(dir) / (r.experiment + "_summary.txt");
  auto put = [](const fs::path& target, auto&& writer) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
      writer(out);
      out.flush();
      if (!out) {
        out.close();
        fs::remove(tmp);
        throw std::runtime_error("write failed for '" + tmp.string() + "'");
      }
    }
    fs::rename(tmp, target);
  };
  put(txt, [&](std::ostream& o) { write_summary(o, r); });
  put(csv, [&](std::ostream& o) { write_csv(o, r); });
  return {csv.string(), txt.string()};
}

}  // namespace dunkl
