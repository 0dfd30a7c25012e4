#pragma once

// Run configuration: a flat sectioned key=value file.
//
//   # comment
//   [section]
//   key = value
//
// Values are numbers, `pi` expressions of the form [a*]pi[/b], or
// comma-separated lists of those. Every key can be overridden from the
// environment as ZLL_<SECTION>_<KEY> (upper case), applied after the file.

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "zll/bohr.hpp"
#include "zll/error.hpp"
#include "zll/factorization.hpp"
#include "zll/hardy_table.hpp"
#include "zll/ladder.hpp"
#include "zll/meta.hpp"
#include "zll/zeta.hpp"

namespace zll {

struct RunConfig {
  EngineConfig engine{};
  HardyTableConfig hardy{};
  LadderConfig ladder{};

  long L = 100;
  std::vector<double> U = {kPi / 16, kPi / 10, kPi / 8};
  KTriple k{};
  std::vector<long> scan_L = {100, 200, 400, 800};
  double min_gap = 1e-6;

  StripParams strips{0.502, 0.90, {0.52, 0.75, 0.85}, 0.015};
  BohrConfig bohr{};

  FactorizationOptions fact{};
  double meta_envelope = 0.05;

  std::string cache_path;
  std::string json_path;
  std::string csv_path;
  std::string trend_csv_path;

  UGrid u_grid() const { return {U, min_gap}; }
  MetaOptions meta() const { return {fact.cert_tol, meta_envelope}; }

  // Checks every constraint of the owning modules.
  void validate() const {
    engine.validate();
    hardy.validate();
    ladder.validate();
    bohr.validate();
    build_strips(strips);
    u_grid().validate();
    if (!(meta_envelope > 0)) throw ConfigError("tolerances.meta_envelope must be > 0");
    if (!(fact.cert_tol > 0)) throw ConfigError("tolerances.cert_tol must be > 0");
    if (fact.k0 < 1) throw ConfigError("grid.k0 must be >= 1");
    for (int kk : {k.k1, k.k2, k.k3}) {
      if (kk < 1 || kk > fact.k0) throw ConfigError("grid.k entries must lie in [1, k0]");
    }
    for (long l : scan_L) {
      if (!(double(l) >= ladder.L0)) throw ConfigError("grid.scan_L entries must be >= L0");
    }
    if (!(double(L) >= ladder.L0)) throw ConfigError("grid.L must be >= ladder.L0");
    const FunctionId fs[] = {FunctionId::sin2(), FunctionId::cos2(), FunctionId::cos2t()};
    for (double u : U) {
      for (const auto& f : fs) {
        if (!(u > 0 && u < f.u_max)) {
          throw ConfigError("grid.U value " + std::to_string(u) + " outside (0, u_max) for " +
                            f.name);
        }
      }
    }
    if (bohr.t_max > engine.t_max) throw ConfigError("bohr.t_max exceeds engine.t_max");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline double parse_plain(const std::string& s, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError(key + ": cannot parse '" + s + "'");
  return v;
}

// number | [a*]pi[/b]
inline double parse_real(const std::string& raw, const std::string& key) {
  const std::string s = lower(trim(raw));
  const auto p = s.find("pi");
  if (p == std::string::npos) return parse_plain(s, key);
  double v = kPi;
  const std::string head = trim(s.substr(0, p));
  if (!head.empty()) {
    if (head.back() != '*') throw ConfigError(key + ": expected a*pi in '" + raw + "'");
    v *= parse_plain(trim(head.substr(0, head.size() - 1)), key);
  }
  const std::string tail = trim(s.substr(p + 2));
  if (!tail.empty()) {
    if (tail.front() != '/') throw ConfigError(key + ": expected pi/b in '" + raw + "'");
    v /= parse_plain(trim(tail.substr(1)), key);
  }
  return v;
}

inline std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item, key));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

inline long parse_integer(const std::string& s, const std::string& key) {
  const double v = parse_real(s, key);
  if (v != std::floor(v)) throw ConfigError(key + ": expected an integer");
  return static_cast<long>(v);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

inline const std::map<std::string, Setter>& config_setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    auto r = [&m](const std::string& name, std::function<double&(RunConfig&)> ref) {
      m[name] = [ref](RunConfig& c, const std::string& v, const std::string& k) {
        ref(c) = parse_real(v, k);
      };
    };
    auto i = [&m](const std::string& name, std::function<int&(RunConfig&)> ref) {
      m[name] = [ref](RunConfig& c, const std::string& v, const std::string& k) {
        ref(c) = static_cast<int>(parse_integer(v, k));
      };
    };
    auto s = [&m](const std::string& name, std::function<std::string&(RunConfig&)> ref) {
      m[name] = [ref](RunConfig& c, const std::string& v, const std::string&) { ref(c) = v; };
    };

    r("engine.target_rel_error", [](RunConfig& c) -> double& { return c.engine.target_rel_error; });
    i("engine.euler_maclaurin_terms", [](RunConfig& c) -> int& { return c.engine.euler_maclaurin_terms; });
    i("engine.main_sum_floor", [](RunConfig& c) -> int& { return c.engine.main_sum_floor; });
    r("engine.main_sum_scale", [](RunConfig& c) -> double& { return c.engine.main_sum_scale; });
    i("engine.riemann_siegel_correction_order",
      [](RunConfig& c) -> int& { return c.engine.riemann_siegel_correction_order; });
    r("engine.crossover_t", [](RunConfig& c) -> double& { return c.engine.crossover_t; });
    r("engine.t_max", [](RunConfig& c) -> double& { return c.engine.t_max; });

    r("hardy.tol", [](RunConfig& c) -> double& { return c.hardy.tol; });
    r("hardy.spacing", [](RunConfig& c) -> double& { return c.hardy.spacing; });

    r("ladder.l0", [](RunConfig& c) -> double& { return c.ladder.L0; });
    r("ladder.c0", [](RunConfig& c) -> double& { return c.ladder.c0; });
    r("ladder.root_tol", [](RunConfig& c) -> double& { return c.ladder.root_tol; });

    m["grid.l"] = [](RunConfig& c, const std::string& v, const std::string& k) {
      c.L = parse_integer(v, k);
    };
    m["grid.u"] = [](RunConfig& c, const std::string& v, const std::string& k) {
      c.U = parse_list(v, k);
    };
    m["grid.k"] = [](RunConfig& c, const std::string& v, const std::string& k) {
      const auto l = parse_list(v, k);
      if (l.size() == 1) {
        c.k = {int(l[0]), int(l[0]), int(l[0])};
      } else if (l.size() == 3) {
        c.k = {int(l[0]), int(l[1]), int(l[2])};
      } else {
        throw ConfigError(k + ": expected one value or a triple");
      }
      for (double x : l) {
        if (x != std::floor(x)) throw ConfigError(k + ": expected integers");
      }
    };
    m["grid.scan_l"] = [](RunConfig& c, const std::string& v, const std::string& k) {
      c.scan_L.clear();
      std::stringstream ss(v);
      std::string item;
      while (std::getline(ss, item, ',')) c.scan_L.push_back(parse_integer(item, k));
      if (c.scan_L.empty()) throw ConfigError(k + ": empty list");
    };
    r("grid.min_gap", [](RunConfig& c) -> double& { return c.min_gap; });
    i("grid.k0", [](RunConfig& c) -> int& { return c.fact.k0; });

    r("strips.sigma1", [](RunConfig& c) -> double& { return c.strips.sigma1; });
    r("strips.sigma2", [](RunConfig& c) -> double& { return c.strips.sigma2; });
    r("strips.delta", [](RunConfig& c) -> double& { return c.strips.delta; });
    m["strips.sigma0"] = [](RunConfig& c, const std::string& v, const std::string& k) {
      const auto l = parse_list(v, k);
      if (l.size() != 3) throw ConfigError(k + ": expected three centres");
      c.strips.sigma0 = {l[0], l[1], l[2]};
    };

    r("bohr.t_start", [](RunConfig& c) -> double& { return c.bohr.t_start; });
    r("bohr.t_max", [](RunConfig& c) -> double& { return c.bohr.t_max; });
    r("bohr.h_w", [](RunConfig& c) -> double& { return c.bohr.window_height; });
    r("bohr.root_tol", [](RunConfig& c) -> double& { return c.bohr.root_tol; });
    r("bohr.boundary_eps", [](RunConfig& c) -> double& { return c.bohr.boundary_eps; });
    r("bohr.perturbation", [](RunConfig& c) -> double& { return c.bohr.perturbation; });

    r("tolerances.cert_tol", [](RunConfig& c) -> double& { return c.fact.cert_tol; });
    r("tolerances.mvp_tol", [](RunConfig& c) -> double& { return c.fact.mvp_tol; });
    r("tolerances.meta_envelope", [](RunConfig& c) -> double& { return c.meta_envelope; });
    i("tolerances.mvp_cells", [](RunConfig& c) -> int& { return c.fact.mvp.cells; });

    s("cache.path", [](RunConfig& c) -> std::string& { return c.cache_path; });
    s("output.json_path", [](RunConfig& c) -> std::string& { return c.json_path; });
    s("output.csv_path", [](RunConfig& c) -> std::string& { return c.csv_path; });
    s("output.trend_csv_path", [](RunConfig& c) -> std::string& { return c.trend_csv_path; });
    return m;
  }();
  return table;
}

inline void set_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& t = config_setters();
  const auto it = t.find(lower(key));
  if (it == t.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, trim(value), key);
}

}  // namespace detail

inline void parse_config_text(const std::string& text, RunConfig& cfg) {
  std::stringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section");
      }
      section = detail::lower(detail::trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    }
    detail::set_key(cfg, section + "." + detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

inline RunConfig load_config_file(const std::string& path, RunConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  parse_config_text(ss.str(), cfg);
  return cfg;
}

// ZLL_ENGINE_CROSSOVER_T=... style overrides. `getenv` is injectable for
// tests.
inline void apply_env_overrides(RunConfig& cfg,
                                const std::function<const char*(const char*)>& getenv_fn =
                                    [](const char* n) { return std::getenv(n); }) {
  for (const auto& [key, setter] : detail::config_setters()) {
    std::string name = "ZLL_" + key;
    for (auto& c : name) {
      c = (c == '.') ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (const char* v = getenv_fn(name.c_str())) setter(cfg, detail::trim(v), key);
  }
}

inline nlohmann::json to_json(const RunConfig& c) {
  using nlohmann::json;
  return json{
      {"engine",
       {{"target_rel_error", c.engine.target_rel_error},
        {"euler_maclaurin_terms", c.engine.euler_maclaurin_terms},
        {"main_sum_floor", c.engine.main_sum_floor},
        {"main_sum_scale", c.engine.main_sum_scale},
        {"riemann_siegel_correction_order", c.engine.riemann_siegel_correction_order},
        {"crossover_t", c.engine.crossover_t},
        {"t_max", c.engine.t_max}}},
      {"hardy", {{"tol", c.hardy.tol}, {"spacing", c.hardy.spacing}}},
      {"ladder", {{"L0", c.ladder.L0}, {"c0", c.ladder.c0}, {"root_tol", c.ladder.root_tol}}},
      {"grid",
       {{"L", c.L},
        {"U", c.U},
        {"k", {c.k.k1, c.k.k2, c.k.k3}},
        {"k0", c.fact.k0},
        {"scan_L", c.scan_L},
        {"min_gap", c.min_gap},
        {"min_gap_enforceable", c.u_grid().gap_enforceable()}}},
      {"strips",
       {{"sigma1", c.strips.sigma1},
        {"sigma2", c.strips.sigma2},
        {"sigma0", c.strips.sigma0},
        {"delta", c.strips.delta}}},
      {"bohr",
       {{"t_start", c.bohr.t_start},
        {"t_max", c.bohr.t_max},
        {"h_w", c.bohr.window_height},
        {"root_tol", c.bohr.root_tol}}},
      {"tolerances",
       {{"cert_tol", c.fact.cert_tol},
        {"mvp_tol", c.fact.mvp_tol},
        {"meta_envelope", c.meta_envelope}}}};
}

}  // namespace zll
