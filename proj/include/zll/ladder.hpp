#pragma once

// Jacob's ladder phi1 and its reverse iterations.
//
// phi1(T) is the unique x with H(x) = A(T), where
//   H(x) = x ln x + (gamma - ln 2 pi) x + c0
// and A is the Hardy-Littlewood integral. Differentiating gives
//   phi1'(t) = Z(t)^2 / H'(phi1(t)) = Z(t)^2 / omega(t) = Ztilde^2(t),
// so every change of variables u = phi1(t) is exact up to quadrature and
// root-finding tolerances.

#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "zll/error.hpp"
#include "zll/hardy_table.hpp"
#include "zll/zeta.hpp"

namespace zll {

struct LadderConfig {
  double L0 = 100.0;
  double c0 = 0.0;
  double root_tol = 1e-10;
  double gamma_euler = kEulerGamma;

  void validate() const {
    if (!(L0 >= 10.0)) throw ConfigError("ladder.L0 must be >= 10");
    if (!(root_tol > 0 && root_tol < 1e-3)) {
      throw ConfigError("ladder.root_tol must be in (0, 1e-3)");
    }
  }
};

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  int depth = 0;

  double length() const { return hi - lo; }
  bool contains_open(double x) const { return x > lo && x < hi; }
};

struct SegmentChain {
  // segments[0] is the base [pi L, pi L + U]; segments[r] is the r-th
  // reverse iterate.
  std::vector<Segment> segments;
  // Human-readable descriptions of disjointness or mapping failures.
  std::vector<std::string> violations;

  const Segment& base() const { return segments.front(); }
  const Segment& at(int r) const { return segments.at(static_cast<std::size_t>(r)); }
  int depth() const { return static_cast<int>(segments.size()) - 1; }
  bool ok() const { return violations.empty(); }
};

// x_0 = xi, x_{r+1} = phi1(x_r), and the Jacobian prod_{r<k} Ztilde^2(x_r).
struct LadderOrbit {
  std::vector<double> points;
  double jacobian = 1.0;
};

class LadderTable {
 public:
  LadderTable(std::shared_ptr<HardyIntegralTable> hardy, LadderConfig cfg = {})
      : hardy_(std::move(hardy)), cfg_(cfg) {
    if (!hardy_) throw ConfigError("ladder requires a Hardy integral table");
    cfg_.validate();
    const double h10 = h(10.0);
    h_at_10_ = h10;
  }

  const LadderConfig& config() const noexcept { return cfg_; }
  const ZetaEngine& engine() const noexcept { return hardy_->engine(); }
  HardyIntegralTable& hardy() const noexcept { return *hardy_; }

  double h(double x) const {
    return x * std::log(x) + (cfg_.gamma_euler - std::log(kTwoPi)) * x + cfg_.c0;
  }
  double h_prime(double x) const {
    return std::log(x) + 1.0 + cfg_.gamma_euler - std::log(kTwoPi);
  }

  // Inverse of H on [10, inf). H is convex and increasing there, so Newton
  // started to the right of the root decreases monotonically onto it.
  double h_inverse(double y) const {
    if (!std::isfinite(y) || y < h_at_10_) {
      throw BracketingFailure("H^{-1}: value " + std::to_string(y) +
                              " below H(10); ladder table corrupt");
    }
    double x = std::max(10.0, y);
    for (int it = 0; it < 200; ++it) {
      const double step = (h(x) - y) / h_prime(x);
      x -= step;
      if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * x) break;
    }
    return x;
  }

  double phi1(double T) const {
    require_domain(T, "phi1");
    return h_inverse((*hardy_)(T));
  }

  // The unique x > T with phi1(x) = T, i.e. A(x) = H(T). Safeguarded
  // Newton with derivative Z(x)^2 and bisection whenever Newton would leave
  // the bracket or Z^2 nearly vanishes.
  double phi1_inverse(double T) const {
    require_domain(T, "phi1_inverse");
    const double target = h(T);
    const double t_max = engine().config().t_max;
    double lo = T;
    double f_lo = (*hardy_)(lo) - target;
    if (!(f_lo < 0.0)) {
      throw BracketingFailure("phi1_inverse: A(T) >= H(T) at T = " + std::to_string(T));
    }
    const double guess = (1.0 - cfg_.gamma_euler) * T / std::log(T);
    double hi = T + 1.5 * guess + 1.0;
    double f_hi;
    for (double widen = 1.5 * guess + 1.0;; widen *= 2.0) {
      if (hi > t_max) {
        throw SearchWindowExhausted("phi1_inverse: preimage of " + std::to_string(T) +
                                    " beyond t_max");
      }
      f_hi = (*hardy_)(hi) - target;
      if (f_hi >= 0.0) break;
      lo = hi;
      f_lo = f_hi;
      hi += widen;
    }

    double x = std::clamp(T + guess, lo, hi);
    if (x == lo || x == hi) x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double fx = (*hardy_)(x) - target;
      if (fx == 0.0) return x;
      if (fx < 0.0) lo = x; else hi = x;
      const double d = hardy_->integrand(x);
      double next = (d > 0.0) ? x - fx / d : lo - 1.0;
      const bool newton_ok = next > lo && next < hi;
      if (!newton_ok) next = 0.5 * (lo + hi);
      const double step = std::abs(next - x);
      x = next;
      if (newton_ok && step <= cfg_.root_tol * x) {
        // one polishing step in the quadratic regime
        const double fp = (*hardy_)(x) - target;
        const double dp = hardy_->integrand(x);
        if (dp > 0.0) {
          const double polished = x - fp / dp;
          if (std::abs(polished - x) <= step) x = polished;
        }
        return x;
      }
      if (hi - lo <= 1e-15 * x) return x;
    }
    throw NonConvergence("phi1_inverse did not converge at T = " + std::to_string(T));
  }

  double omega(double t) const { return h_prime(phi1(t)); }

  double z_tilde_sq(double t) const {
    return hardy_->integrand(t) / omega(t);
  }

  LadderOrbit orbit(double xi, int k) const {
    LadderOrbit o;
    o.points.reserve(static_cast<std::size_t>(k) + 1);
    o.points.push_back(xi);
    for (int r = 0; r < k; ++r) {
      const double x = o.points.back();
      const double next = phi1(x);
      o.jacobian *= hardy_->integrand(x) / h_prime(next);
      o.points.push_back(next);
    }
    return o;
  }

  // phi1 applied k times.
  double phi1_iterate(double x, int k) const {
    for (int r = 0; r < k; ++r) x = phi1(x);
    return x;
  }

  SegmentChain reverse_chain(long L, double U, int k) const {
    if (!(L >= cfg_.L0)) throw DomainError("reverse_chain requires L >= L0");
    if (!(U > 0.0 && U < kPi / 2)) throw DomainError("reverse_chain requires 0 < U < pi/2");
    if (k < 1) throw DomainError("reverse_chain requires k >= 1");
    SegmentChain chain;
    const double lo0 = kPi * double(L);
    chain.segments.push_back({lo0, lo0 + U, 0});
    for (int r = 1; r <= k; ++r) {
      const Segment& prev = chain.segments.back();
      Segment s{phi1_inverse(prev.lo), phi1_inverse(prev.hi), r};
      if (!(s.lo < s.hi)) {
        chain.violations.push_back("depth " + std::to_string(r) + " segment not ordered");
      }
      if (!(s.lo > prev.hi)) {
        chain.violations.push_back("depth " + std::to_string(r) +
                                   " overlaps depth " + std::to_string(r - 1));
      }
      chain.segments.push_back(s);
    }
    return chain;
  }

 private:
  void require_domain(double T, const char* op) const {
    if (!(T >= cfg_.L0)) {
      throw DomainError(std::string(op) + " requires T >= L0 (" +
                        std::to_string(cfg_.L0) + "), got " + std::to_string(T));
    }
  }

  std::shared_ptr<HardyIntegralTable> hardy_;
  LadderConfig cfg_;
  double h_at_10_ = 0.0;
};

// Persists the Hardy checkpoints together with the ladder calibration.
inline nlohmann::json ladder_cache_json(const LadderTable& lt) {
  nlohmann::json j = lt.hardy().to_json();
  j["format"] = "zll-ladder-cache";
  j["version"] = 1;
  j["ladder"] = {{"gamma_euler", lt.config().gamma_euler},
                 {"c0", lt.config().c0},
                 {"root_tol", lt.config().root_tol}};
  return j;
}

inline std::string adopt_ladder_cache(LadderTable& lt, const nlohmann::json& j) {
  try {
    const auto& l = j.at("ladder");
    if (l.at("gamma_euler").get<double>() != lt.config().gamma_euler ||
        l.at("c0").get<double>() != lt.config().c0) {
      return "ladder calibration differs";
    }
  } catch (const nlohmann::json::exception& e) {
    return std::string("malformed cache: ") + e.what();
  }
  return lt.hardy().adopt(j);
}

}  // namespace zll
