#pragma once

// JSON and CSV emission for report bundles, and residual-vs-L trend tables.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "zll/error.hpp"
#include "zll/meta.hpp"

namespace zll {

// Writes through a sibling temp file and renames, so readers never see a
// partial file.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    if (!out) throw ConfigError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const char* csv_header() {
  return "L,U,k1,k2,k3,equation_id,lhs,rhs,residual,tolerance,verdict\n";
}

inline std::string csv_rows(const ReportBundle& b) {
  std::string out;
  char buf[512];
  for (const auto& r : b.reports) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%d,%d,%d,%s,%.17g,%.17g,%.17g,%.17g,%s\n", b.L, b.U,
                  b.k.k1, b.k.k2, b.k.k3, r.label().c_str(), r.lhs, r.rhs, r.residual,
                  r.tolerance, r.pass ? "PASS" : "FAIL");
    out += buf;
  }
  return out;
}

inline std::string to_csv(const std::vector<ReportBundle>& bundles) {
  std::string out = csv_header();
  for (const auto& b : bundles) out += csv_rows(b);
  return out;
}

struct TrendPoint {
  long L = 0;
  std::size_t samples = 0;
  double median = 0.0;
};

struct Trend {
  std::string equation;
  std::vector<TrendPoint> points;  // ascending L
  bool non_increasing() const {
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].median > points[i - 1].median) return false;
    }
    return !points.empty();
  }
};

inline double median_of(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Median residual per (equation label, L) over all bundles carrying it.
inline std::vector<Trend> residual_trends(const std::vector<ReportBundle>& bundles) {
  std::map<std::string, std::map<long, std::vector<double>>> acc;
  for (const auto& b : bundles) {
    for (const auto& r : b.reports) acc[r.label()][b.L].push_back(r.residual);
  }
  std::vector<Trend> out;
  for (auto& [label, byL] : acc) {
    Trend t{label, {}};
    for (auto& [L, res] : byL) t.points.push_back({L, res.size(), median_of(res)});
    out.push_back(std::move(t));
  }
  return out;
}

inline std::string trend_csv(const std::vector<Trend>& trends) {
  std::string out = "equation_id,L,samples,median_residual,non_increasing\n";
  char buf[256];
  for (const auto& t : trends) {
    const bool ok = t.non_increasing();
    for (const auto& p : t.points) {
      std::snprintf(buf, sizeof buf, "%s,%ld,%zu,%.17g,%s\n", t.equation.c_str(), p.L, p.samples,
                    p.median, ok ? "yes" : "no");
      out += buf;
    }
  }
  return out;
}

inline nlohmann::json bundles_json(const std::vector<ReportBundle>& bundles) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& b : bundles) a.push_back(to_json(b));
  return a;
}

}  // namespace zll
