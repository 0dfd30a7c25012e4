#pragma once

// End-to-end orchestration used by the command-line front end.

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "zll/config.hpp"
#include "zll/meta.hpp"
#include "zll/report_io.hpp"

namespace zll {

enum ExitCode : int { kExitOk = 0, kExitNumerical = 2, kExitConfig = 3, kExitNotFound = 4 };

class Pipeline {
 public:
  explicit Pipeline(RunConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    hardy_ = std::make_shared<HardyIntegralTable>(ZetaEngine(cfg_.engine), cfg_.hardy);
    ladder_ = std::make_unique<LadderTable>(hardy_, cfg_.ladder);
    solver_ = std::make_unique<BohrSolver>(hardy_->engine(), cfg_.bohr);
    layout_ = build_strips(cfg_.strips);
  }

  const RunConfig& config() const noexcept { return cfg_; }
  const LadderTable& ladder() const noexcept { return *ladder_; }
  LadderTable& ladder() noexcept { return *ladder_; }
  const BohrSolver& solver() const noexcept { return *solver_; }
  const StripLayout& layout() const noexcept { return layout_; }

  PipelineContext context() const {
    return {ladder_.get(), solver_.get(), layout_, cfg_.fact, cfg_.meta()};
  }

  // Empty string when the cache was adopted; otherwise why it was not.
  // A missing file is a cold start.
  std::string load_cache(const std::string& path) {
    const std::string text = read_file(path);
    if (text.empty()) return "no cache file";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      return std::string("unreadable cache: ") + e.what();
    }
    return adopt_ladder_cache(*ladder_, j);
  }

  void save_cache(const std::string& path) const {
    write_file_atomic(path, ladder_cache_json(*ladder_).dump());
  }

  std::vector<ReportBundle> run(Stage last, int jobs = 1) const {
    return scan_u_grid(cfg_.u_grid(), cfg_.L, cfg_.k, context(), last, jobs);
  }

  // The full pipeline for every L of the scan grid, in ascending grid order.
  std::vector<ReportBundle> run_scan(int jobs = 1) const {
    const UGrid grid = cfg_.u_grid();
    grid.validate();
    const std::size_t nu = grid.values.size();
    const PipelineContext ctx = context();
    return parallel_map(cfg_.scan_L.size() * nu, jobs, [&](std::size_t i) {
      const std::size_t n = i % nu;
      return run_bundle(static_cast<int>(n) + 1, cfg_.scan_L[i / nu], grid.values[n], cfg_.k,
                        ctx);
    });
  }

  HardyTableStats cache_stats() const { return hardy_->stats(); }

 private:
  RunConfig cfg_;
  std::shared_ptr<HardyIntegralTable> hardy_;
  std::unique_ptr<LadderTable> ladder_;
  std::unique_ptr<BohrSolver> solver_;
  StripLayout layout_{};
};

inline int exit_code_for(const std::vector<ReportBundle>& bundles) {
  bool not_found = false;
  for (const auto& b : bundles) {
    if (b.not_found) {
      not_found = true;
      continue;
    }
    if (!b.ok()) return kExitNumerical;
  }
  return not_found ? kExitNotFound : kExitOk;
}

inline nlohmann::json run_document(const std::string& command, const RunConfig& cfg,
                                   const std::vector<ReportBundle>& bundles) {
  std::size_t pass = 0, fail = 0, informational = 0;
  for (const auto& b : bundles) {
    for (const auto& r : b.reports) {
      if (!r.gating()) {
        ++informational;
      } else if (r.pass) {
        ++pass;
      } else {
        ++fail;
      }
    }
  }
  return {{"command", command},
          {"config", to_json(cfg)},
          {"bundles", bundles_json(bundles)},
          {"summary",
           {{"exit_code", exit_code_for(bundles)},
            {"pass", pass},
            {"fail", fail},
            {"informational", informational}}}};
}

}  // namespace zll
