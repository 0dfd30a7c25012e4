#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>

#include "zll/config.hpp"
#include "zll/report_io.hpp"

using namespace zll;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& env, const std::string& args) {
  const std::string cmd = env + " '" ZLL_CLI_PATH "' " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("zll_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(ParseReal, PiExpressions) {
  EXPECT_DOUBLE_EQ(detail::parse_real("pi/16", "k"), kPi / 16);
  EXPECT_DOUBLE_EQ(detail::parse_real(" 3*pi/8 ", "k"), 3 * kPi / 8);
  EXPECT_DOUBLE_EQ(detail::parse_real("PI", "k"), kPi);
  EXPECT_DOUBLE_EQ(detail::parse_real("2.5e-3", "k"), 2.5e-3);
  EXPECT_THROW(detail::parse_real("pi16", "k"), ConfigError);
  EXPECT_THROW(detail::parse_real("abc", "k"), ConfigError);
  EXPECT_THROW(detail::parse_real("1.0x", "k"), ConfigError);
}

TEST(ConfigFile, ShippedDefaultsMatchBuiltIns) {
  const RunConfig file = load_config_file(ZLL_DEFAULT_CFG);
  EXPECT_EQ(to_json(file), to_json(RunConfig{}));
}

TEST(ConfigFile, SectionsAndLists) {
  RunConfig c;
  parse_config_text(
      "# comment\n[grid]\nL = 300\nU = pi/16, pi/8 # trailing\nk = 1, 2, 3\n"
      "scan_L = 100, 200\n[strips]\nsigma0 = 0.6, 0.7, 0.8\n[bohr]\nt_max = 15\n",
      c);
  EXPECT_EQ(c.L, 300);
  ASSERT_EQ(c.U.size(), 2u);
  EXPECT_DOUBLE_EQ(c.U[1], kPi / 8);
  EXPECT_EQ(c.k.k3, 3);
  EXPECT_EQ(c.scan_L, (std::vector<long>{100, 200}));
  EXPECT_EQ(c.strips.sigma0[2], 0.8);
  EXPECT_EQ(c.bohr.t_max, 15.0);
}

TEST(ConfigFile, Errors) {
  RunConfig c;
  EXPECT_THROW(parse_config_text("[grid]\nbogus = 1\n", c), ConfigError);
  EXPECT_THROW(parse_config_text("L = 1\n", c), ConfigError);
  EXPECT_THROW(parse_config_text("[grid\nL = 1\n", c), ConfigError);
  EXPECT_THROW(parse_config_text("[grid]\nL\n", c), ConfigError);
  EXPECT_THROW(parse_config_text("[grid]\nL = 100.5\n", c), ConfigError);
  EXPECT_THROW(parse_config_text("[grid]\nk = 1, 2\n", c), ConfigError);
  EXPECT_THROW(load_config_file("/nonexistent/zll.cfg"), ConfigError);
}

TEST(ConfigEnv, OverridesApply) {
  const std::map<std::string, std::string> env = {{"ZLL_BOHR_T_MAX", "15"},
                                                  {"ZLL_GRID_U", "pi/10"},
                                                  {"ZLL_ENGINE_CROSSOVER_T", "600"}};
  RunConfig c;
  apply_env_overrides(c, [&](const char* n) -> const char* {
    const auto it = env.find(n);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  EXPECT_EQ(c.bohr.t_max, 15.0);
  EXPECT_EQ(c.U, (std::vector<double>{kPi / 10}));
  EXPECT_EQ(c.engine.crossover_t, 600.0);
}

TEST(ConfigValidate, RangeChecks) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.U = {kPi / 2};
  EXPECT_THROW(c.validate(), ConfigError);
  c = RunConfig{};
  c.k = {1, 2, 9};
  EXPECT_THROW(c.validate(), ConfigError);
  c = RunConfig{};
  c.strips.delta = 0.3;
  EXPECT_THROW(c.validate(), LayoutInvalid);
  c = RunConfig{};
  c.L = 50;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(WriteAtomic, ReplacesContent) {
  const fs::path d = scratch_dir("atomic");
  const std::string p = (d / "sub" / "x.json").string();
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  EXPECT_EQ(read_file(p), "two");
  EXPECT_FALSE(fs::exists(p + ".tmp"));
}

TEST(Cli, ConfigErrorExitsThree) {
  EXPECT_EQ(run_cli("ZLL_GRID_U=pi/2", "factorize"), 3);
  EXPECT_EQ(run_cli("", "factorize --config /nonexistent.cfg"), 3);
  EXPECT_EQ(run_cli("", "nosuchcommand"), 3);
}

TEST(Cli, ColdStartWithMissingCache) {
  const fs::path d = scratch_dir("cold");
  const std::string cache = (d / "cache.json").string();
  const std::string json = (d / "out.json").string();
  EXPECT_EQ(run_cli("ZLL_GRID_U=pi/8 ZLL_GRID_K=1",
                    "factorize --cache " + cache + " --json " + json + " --csv " +
                        (d / "out.csv").string()),
            0);
  EXPECT_TRUE(fs::exists(cache));
  EXPECT_TRUE(fs::exists(json));
  EXPECT_TRUE(fs::exists(json + ".meta.json"));
  const nlohmann::json doc = nlohmann::json::parse(read_file(json));
  EXPECT_EQ(doc["summary"]["exit_code"], 0);
  EXPECT_EQ(doc["bundles"].size(), 1u);
}

TEST(Cli, GraftNotFoundExitsFour) {
  const fs::path d = scratch_dir("notfound");
  const std::string json = (d / "out.json").string();
  EXPECT_EQ(run_cli("ZLL_GRID_U=pi/8 ZLL_GRID_K=1 ZLL_BOHR_T_MAX=15", "graft --json " + json), 4);
  const nlohmann::json doc = nlohmann::json::parse(read_file(json));
  EXPECT_EQ(doc["summary"]["exit_code"], 4);
  const auto& failures = doc["bundles"][0]["failures"];
  ASSERT_FALSE(failures.empty());
  EXPECT_NE(failures[0].get<std::string>().find("NotFound"), std::string::npos);
}
