#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hierakit {

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Report {
  int schema_version = 1;
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  std::map<std::string, std::string> environment;
  double runtime_seconds = 0.0;

  bool all_pass() const;
  nlohmann::json to_json() const;
  void print(std::ostream& os) const;
};

std::map<std::string, std::string> environment_stamp();

// Deterministic CSV: values rendered with "%.17g", one row per line.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_string() const;
};

void write_text_file(const std::string& path, const std::string& content);
void write_report_files(const Report& report, const std::string& out_dir);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace hierakit
