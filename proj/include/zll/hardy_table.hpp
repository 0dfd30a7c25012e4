#pragma once

// Cached Hardy-Littlewood integral A(T) = int_0^T Z(t)^2 dt.
//
// Checkpoints sit on the fixed lattice T_j = j * spacing. A(T) for any T is
// the checkpoint value at floor(T / spacing) plus a fresh quadrature up to
// T; nothing is interpolated. Checkpoint j is always derived from
// checkpoint j - 1 by the same quadrature call, so the table content is a
// pure function of (engine config, tol, spacing) regardless of the order in
// which callers extend it.

#include <atomic>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "zll/error.hpp"
#include "zll/quadrature.hpp"
#include "zll/zeta.hpp"

namespace zll {

struct HardyTableConfig {
  double tol = kDefaultQuadratureTol;
  double spacing = 1.0;

  void validate() const {
    if (!(tol > 0)) throw ConfigError("hardy.tol must be > 0");
    if (!(spacing > 0)) throw ConfigError("hardy.spacing must be > 0");
  }
};

struct HardyTableStats {
  std::size_t checkpoints = 0;
  std::size_t loaded = 0;
  std::size_t computed = 0;
  long evaluations = 0;
};

class HardyIntegralTable {
 public:
  explicit HardyIntegralTable(ZetaEngine engine, HardyTableConfig cfg = {})
      : engine_(std::move(engine)), cfg_(cfg) {
    cfg_.validate();
    values_.push_back(0.0);
  }

  HardyIntegralTable(const HardyIntegralTable&) = delete;
  HardyIntegralTable& operator=(const HardyIntegralTable&) = delete;

  const ZetaEngine& engine() const noexcept { return engine_; }
  const HardyTableConfig& config() const noexcept { return cfg_; }

  double integrand(double t) const { return engine_.z_squared(t); }

  IntegralResult integrate_z_squared(double a, double b) const {
    auto f = [this](double t) { return engine_.z_squared(t); };
    IntegralResult r = integrate(f, a, b, cfg_.tol);
    evaluations_ += r.evaluations;
    return r;
  }

  double checkpoint_time(std::size_t j) const { return double(j) * cfg_.spacing; }

  // A(T).
  double operator()(double T) const {
    if (!(T >= 0.0)) throw DomainError("hardy_integral requires T >= 0");
    if (T > engine_.config().t_max) {
      throw RangeError("hardy_integral: T beyond engine t_max");
    }
    const auto j = static_cast<std::size_t>(std::floor(T / cfg_.spacing));
    const double base = checkpoint(j);
    const double tj = checkpoint_time(j);
    if (T <= tj) return base;
    return base + integrate_z_squared(tj, T).value;
  }

  std::vector<std::pair<double, double>> checkpoints() const {
    std::shared_lock lock(mutex_);
    std::vector<std::pair<double, double>> out;
    out.reserve(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j) {
      out.emplace_back(checkpoint_time(j), values_[j]);
    }
    return out;
  }

  HardyTableStats stats() const {
    std::shared_lock lock(mutex_);
    return {values_.size(), loaded_, computed_, evaluations_.load()};
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["tol"] = cfg_.tol;
    j["spacing"] = cfg_.spacing;
    const auto& e = engine_.config();
    j["engine"] = {{"target_rel_error", e.target_rel_error},
                   {"euler_maclaurin_terms", e.euler_maclaurin_terms},
                   {"main_sum_floor", e.main_sum_floor},
                   {"main_sum_scale", e.main_sum_scale},
                   {"riemann_siegel_correction_order", e.riemann_siegel_correction_order},
                   {"crossover_t", e.crossover_t}};
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [t, a] : checkpoints()) pts.push_back({t, a});
    j["checkpoints"] = std::move(pts);
    return j;
  }

  // Adopts persisted checkpoints if they were produced under the same
  // engine and quadrature settings. Returns an empty string on success,
  // otherwise the reason the cache was ignored.
  std::string adopt(const nlohmann::json& j) {
    try {
      if (j.at("tol").get<double>() != cfg_.tol ||
          j.at("spacing").get<double>() != cfg_.spacing) {
        return "quadrature settings differ";
      }
      if (j.at("engine") != to_json().at("engine")) return "engine settings differ";
      std::vector<double> vals;
      const auto& pts = j.at("checkpoints");
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const double t = pts[k].at(0).get<double>();
        const double a = pts[k].at(1).get<double>();
        if (t != checkpoint_time(k)) return "checkpoint lattice mismatch";
        if (k == 0 ? a != 0.0 : !(a >= vals.back())) return "non-monotone checkpoints";
        vals.push_back(a);
      }
      if (vals.empty()) return "empty checkpoint list";
      std::unique_lock lock(mutex_);
      if (vals.size() > values_.size()) {
        loaded_ = vals.size() - 1;
        values_ = std::move(vals);
      }
      return {};
    } catch (const nlohmann::json::exception& e) {
      return std::string("malformed cache: ") + e.what();
    }
  }

 private:
  double checkpoint(std::size_t j) const {
    {
      std::shared_lock lock(mutex_);
      if (j < values_.size()) return values_[j];
    }
    std::unique_lock lock(mutex_);
    while (values_.size() <= j) {
      const std::size_t k = values_.size();
      const double step =
          integrate_z_squared(checkpoint_time(k - 1), checkpoint_time(k)).value;
      values_.push_back(values_.back() + step);
      ++computed_;
    }
    return values_[j];
  }

  ZetaEngine engine_;
  HardyTableConfig cfg_;
  mutable std::shared_mutex mutex_;
  mutable std::vector<double> values_;
  mutable std::size_t loaded_ = 0;
  mutable std::size_t computed_ = 0;
  mutable std::atomic<long> evaluations_{0};
};

}  // namespace zll
