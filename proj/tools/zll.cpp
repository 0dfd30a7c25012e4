// zll: command-line front end for the ladder / factorization / a-point
// pipeline.
//
//   zll <factorize|hybrid|graft|meta|scan> [--config PATH] [--cache PATH]
//       [--json PATH] [--csv PATH] [--trend-csv PATH] [--jobs N] [--seedless]
//
// Exit codes: 0 all gating reports PASS, 2 numerical failure, 3 config
// error, 4 a-point not found below bohr.t_max.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "zll/pipeline.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  std::string cache_path;
  std::string json_path;
  std::string csv_path;
  std::string trend_csv_path;
  int jobs = 1;
  bool seedless = true;
};

void print_summary(const std::vector<zll::ReportBundle>& bundles) {
  for (const auto& b : bundles) {
    std::printf("L=%ld U=%.6f k=(%d,%d,%d)\n", b.L, b.U, b.k.k1, b.k.k2, b.k.k3);
    for (const auto& g : b.grafts) {
      std::printf("  w%d = %.10f%+.10fi  a=%.12f  |zeta(w)-a|=%.2e\n", g.strip_index,
                  g.w.real(), g.w.imag(), g.a_target, g.residual);
    }
    for (const auto& r : b.reports) {
      std::printf("  %-22s residual=%.3e tol=%.1e %s\n", r.label().c_str(), r.residual,
                  r.tolerance, r.pass ? "PASS" : (r.gating() ? "FAIL" : "info"));
    }
    for (const auto& f : b.failures) {
      std::fprintf(stderr, "%s L=%ld n=%d %s\n", b.not_found ? "NOTFOUND" : "FAILURE", b.L, b.n,
                   f.c_str());
    }
  }
}

int run(const std::string& command, const CliArgs& args) {
  using namespace zll;
  RunConfig cfg;
  try {
    if (!args.config_path.empty()) cfg = load_config_file(args.config_path);
    apply_env_overrides(cfg);
    if (!args.cache_path.empty()) cfg.cache_path = args.cache_path;
    if (!args.json_path.empty()) cfg.json_path = args.json_path;
    if (!args.csv_path.empty()) cfg.csv_path = args.csv_path;
    if (!args.trend_csv_path.empty()) cfg.trend_csv_path = args.trend_csv_path;
    cfg.validate();
  } catch (const Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }

  try {
    Pipeline p(cfg);
    std::string cache_note = "no cache";
    if (!cfg.cache_path.empty()) {
      cache_note = p.load_cache(cfg.cache_path);
      if (cache_note.empty()) cache_note = "adopted";
    }
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ReportBundle> bundles;
    if (command == "scan") {
      bundles = p.run_scan(args.jobs);
    } else {
      const Stage stage = command == "factorize" ? Stage::kFactorize
                          : command == "hybrid"  ? Stage::kHybrid
                          : command == "graft"   ? Stage::kGraft
                                                 : Stage::kMeta;
      bundles = p.run(stage, args.jobs);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!cfg.cache_path.empty()) p.save_cache(cfg.cache_path);

    print_summary(bundles);
    const int code = exit_code_for(bundles);
    if (!cfg.json_path.empty()) {
      write_file_atomic(cfg.json_path, run_document(command, cfg, bundles).dump(2) + "\n");
      const HardyTableStats st = p.cache_stats();
      const nlohmann::json meta = {{"seconds", seconds},
                                   {"jobs", args.jobs},
                                   {"cache", cache_note},
                                   {"checkpoints", st.checkpoints},
                                   {"checkpoints_loaded", st.loaded},
                                   {"checkpoints_computed", st.computed},
                                   {"integrand_evaluations", st.evaluations}};
      write_file_atomic(cfg.json_path + ".meta.json", meta.dump(2) + "\n");
    }
    if (!cfg.csv_path.empty()) write_file_atomic(cfg.csv_path, to_csv(bundles));
    if (command == "scan") {
      std::string trend_path = cfg.trend_csv_path;
      if (trend_path.empty() && !cfg.csv_path.empty()) trend_path = cfg.csv_path + ".trend.csv";
      const auto trends = residual_trends(bundles);
      if (!trend_path.empty()) write_file_atomic(trend_path, trend_csv(trends));
      for (const auto& t : trends) {
        std::printf("trend %-22s %s\n", t.equation.c_str(),
                    t.non_increasing() ? "non-increasing" : "not monotone");
      }
    }
    std::printf("%.1f s, exit %d\n", seconds, code);
    return code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const LayoutInvalid& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "%s: %s\n", e.kind().c_str(), e.what());
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jacob's ladder factorization and a-point pipeline"};
  app.require_subcommand(1);
  CliArgs args;
  const char* commands[][2] = {
      {"factorize", "build and verify factorization certificates"},
      {"hybrid", "certificates plus complete hybrid formulas"},
      {"graft", "hybrid formulas plus Bohr a-point grafts"},
      {"meta", "full pipeline including meta-functional equations"},
      {"scan", "full pipeline over grid.scan_L with residual-vs-L trend"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("--config", args.config_path, "config file");
    sub->add_option("--cache", args.cache_path, "ladder cache file");
    sub->add_option("--json", args.json_path, "report JSON output");
    sub->add_option("--csv", args.csv_path, "report CSV output");
    sub->add_option("--trend-csv", args.trend_csv_path, "trend CSV output (scan)");
    sub->add_option("--jobs", args.jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--seedless", args.seedless, "no RNG is used; accepted for compatibility");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : zll::kExitConfig;
  }
  return run(app.get_subcommands().front()->get_name(), args);
}
