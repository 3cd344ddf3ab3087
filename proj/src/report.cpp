#include "hierakit/report.hpp"

#include <nlohmann/json.hpp>

#include <Eigen/Core>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace hierakit {

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["suite"] = suite;
  j["seed"] = seed;
  j["runtime_seconds"] = runtime_seconds;
  j["environment"] = environment;
  j["pass"] = all_pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"pass", c.pass}});
  return j;
}

void Report::print(std::ostream& os) const {
  for (const auto& c : checks) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-44s %-4s  value=%.6g  tol=%.3g", c.name.c_str(),
                  c.pass ? "PASS" : "FAIL", c.value, c.tolerance);
    os << buf << "\n";
  }
  os << "suite " << suite << ": " << (all_pass() ? "PASS" : "FAIL") << "\n";
}

std::map<std::string, std::string> environment_stamp() {
  std::map<std::string, std::string> env;
  env["library"] = "hierakit 0.1.0";
  env["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                 "." + std::to_string(EIGEN_MINOR_VERSION);
#if defined(__clang__)
  env["compiler"] = "clang " __clang_version__;
#elif defined(__GNUC__)
  env["compiler"] = "gcc " __VERSION__;
#else
  env["compiler"] = "unknown";
#endif
  return env;
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out += columns[i];
    out += (i + 1 == columns.size()) ? '\n' : ',';
  }
  char buf[64];
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw std::logic_error("CsvTable: ragged row");
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
      out += buf;
      out += (i + 1 == row.size()) ? '\n' : ',';
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void write_report_files(const Report& report, const std::string& out_dir) {
  if (out_dir.empty()) return;
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir + "/" + report.suite + "_report.json", report.to_json().dump(2) + "\n");
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_loglog_slope: need at least two samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace hierakit
