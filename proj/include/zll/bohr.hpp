#pragma once

// Roots of zeta(w) = a in narrow vertical sub-strips of the critical strip:
// argument-principle window scanning, isolation by subdivision, Newton
// refinement.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zll/error.hpp"
#include "zll/zeta.hpp"

namespace zll {

struct Strip {
  int index = 0;  // 1, 2 or 3
  double centre = 0.0;
  double half_width = 0.0;
  double lo() const { return centre - half_width; }
  double hi() const { return centre + half_width; }
  bool contains(double sigma) const { return sigma > lo() && sigma < hi(); }
};

struct StripParams {
  double sigma1 = 0.60;
  double sigma2 = 0.90;
  std::array<double, 3> sigma0 = {0.65, 0.75, 0.85};
  double delta = 0.02;
};

struct StripLayout {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  std::array<double, 3> sigma0{};
  double delta = 0.0;

  Strip strip(int l) const {
    if (l < 1 || l > 3) throw DomainError("strip index must be 1, 2 or 3");
    return {l, sigma0[l - 1], delta};
  }
};

// Validates every inequality of the three-strip layout and names the first
// violated one.
inline StripLayout build_strips(const StripParams& p) {
  const auto& s = p.sigma0;
  const double d = p.delta;
  auto require = [](bool ok, const char* what) {
    if (!ok) throw LayoutInvalid(std::string("violated: ") + what);
  };
  require(d > 0, "delta > 0");
  require(0.5 < p.sigma1, "1/2 < sigma1");
  require(p.sigma2 < 1.0, "sigma2 < 1");
  require(p.sigma1 < s[0] - d, "sigma1 < sigma0_1 - delta");
  require(s[0] + d < s[1] - d, "sigma0_1 + delta < sigma0_2 - delta");
  require(s[1] + d < s[2] - d, "sigma0_2 + delta < sigma0_3 - delta");
  require(s[2] + d < p.sigma2, "sigma0_3 + delta < sigma2");
  return {p.sigma1, p.sigma2, s, d};
}

struct Rect {
  double sigma_lo, sigma_hi, t_lo, t_hi;
};

struct GraftPoint {
  Complex w;
  double a_target = 0.0;
  int strip_index = 0;
  double residual = 0.0;  // |zeta(w) - a|
  double t_found = 0.0;
  double verify_residual = 0.0;  // same, at doubled Euler-Maclaurin order
  double modulus = 0.0;          // |zeta(w)|
};

inline nlohmann::json to_json(const GraftPoint& g) {
  return {{"re", g.w.real()},
          {"im", g.w.imag()},
          {"a_target", g.a_target},
          {"strip_index", g.strip_index},
          {"residual", g.residual},
          {"modulus", g.modulus},
          {"verify_residual", g.verify_residual}};
}

struct BohrConfig {
  double t_start = 10.0;
  double t_max = 5000.0;
  double window_height = 10.0;
  double root_tol = 1e-10;
  int newton_max_iterations = 50;
  double boundary_eps = 1e-6;
  double perturbation = 1e-4;
  int perturbation_retries = 3;
  // Isolation stops once a box is this small in t.
  double isolation_height = 0.02;

  void validate() const {
    if (!(t_start > 0 && t_max > t_start)) {
      throw ConfigError("bohr: require 0 < t_start < t_max");
    }
    if (!(window_height > 0)) throw ConfigError("bohr.h_w must be > 0");
    if (!(root_tol > 0)) throw ConfigError("bohr.root_tol must be > 0");
  }
};

class BohrSolver {
 public:
  BohrSolver(const ZetaEngine& engine, BohrConfig cfg = {})
      : engine_(engine), verifier_(engine.config().doubled()), cfg_(cfg) {
    cfg_.validate();
  }

  const BohrConfig& config() const noexcept { return cfg_; }

  struct Winding {
    int count = 0;
    double turns = 0.0;  // accumulated argument / 2 pi before rounding
    Rect rect{};         // rectangle actually used, after perturbation
  };

  // Number of roots of zeta(s) - a inside `rect`. Rectangles whose boundary
  // passes too close to a root are perturbed up to `perturbation_retries`
  // times before BoundaryRoot is raised.
  Winding winding_number(const Rect& rect, double a) const {
    for (int attempt = 0; attempt <= cfg_.perturbation_retries; ++attempt) {
      Rect r = rect;
      if (attempt > 0) {
        const double shift =
            cfg_.perturbation * ((attempt % 2 == 1) ? attempt : -attempt);
        r.t_lo += shift;
        r.t_hi += shift;
        // pull vertical edges inward so the rectangle stays inside the strip
        r.sigma_lo += 1e-6 * attempt;
        r.sigma_hi -= 1e-6 * attempt;
      }
      const std::optional<double> turns = boundary_turns(r, a);
      if (!turns) continue;
      const double rounded = std::round(*turns);
      if (std::abs(*turns - rounded) > 0.05) {
        throw NonConvergence("non-integral winding " + std::to_string(*turns));
      }
      return {static_cast<int>(rounded), *turns, r};
    }
    throw BoundaryRoot("root of zeta - a on rectangle boundary near t = " +
                       std::to_string(rect.t_lo));
  }

  // Lowest-t root of zeta(w) = a strictly inside `strip` with
  // im(w) in (t_start, t_max).
  GraftPoint find_a_point(double a, const Strip& strip, double t_start,
                          double t_max) const {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("a-point target must lie in (0, 1)");
    double t = t_start;
    while (t < t_max) {
      const double top = std::min(t + cfg_.window_height, t_max);
      const Winding wn = winding_number({strip.lo(), strip.hi(), t, top}, a);
      if (wn.count >= 1) {
        if (auto g = isolate_and_refine(a, strip, wn.rect)) return *g;
      }
      t = wn.rect.t_hi;
    }
    throw NotFound("no root of zeta(w) = " + std::to_string(a) +
                   " in strip " + std::to_string(strip.index) +
                   " below t_max = " + std::to_string(t_max));
  }

  GraftPoint find_a_point(double a, const Strip& strip) const {
    return find_a_point(a, strip, cfg_.t_start, cfg_.t_max);
  }

  // Next member of the a-point set above height `t_after`.
  GraftPoint next_a_point(double a, const Strip& strip, double t_after) const {
    return find_a_point(a, strip, t_after, cfg_.t_max);
  }

 private:
  Complex shifted(Complex s, double a) const { return engine_.zeta_strip(s) - a; }

  // Accumulated argument change of zeta - a around the boundary, in turns.
  // nullopt when the boundary comes within boundary_eps of a root.
  std::optional<double> boundary_turns(const Rect& r, double a) const {
    const std::array<Complex, 5> corners = {
        Complex(r.sigma_lo, r.t_lo), Complex(r.sigma_hi, r.t_lo),
        Complex(r.sigma_hi, r.t_hi), Complex(r.sigma_lo, r.t_hi),
        Complex(r.sigma_lo, r.t_lo)};
    double total = 0.0;
    Complex v0 = shifted(corners[0], a);
    if (std::abs(v0) < cfg_.boundary_eps) return std::nullopt;
    for (int e = 0; e < 4; ++e) {
      const Complex from = corners[e];
      const Complex dir = corners[e + 1] - from;
      double u = 0.0;
      double h = 1.0 / 16.0;
      while (u < 1.0) {
        const double step = std::min(h, 1.0 - u);
        const double next = (step == 1.0 - u) ? 1.0 : u + step;
        const Complex v1 = shifted(from + next * dir, a);
        if (std::abs(v1) < cfg_.boundary_eps) return std::nullopt;
        // chord shorter than half the nearer radius: |darg| < pi/6
        if (std::abs(v1 - v0) > 0.5 * std::min(std::abs(v0), std::abs(v1))) {
          h = 0.5 * step;
          if (h * std::abs(dir) < 1e-12) return std::nullopt;
          continue;
        }
        total += std::arg(v1 / v0);
        v0 = v1;
        u = next;
        h = std::min(0.25, 1.5 * step);
      }
    }
    return total / kTwoPi;
  }

  // Shrinks a rectangle with nonzero winding towards its lowest root and
  // polishes it with Newton. The search box is always the lower half that
  // still contains a root, so the returned root is the lowest in `window`.
  std::optional<GraftPoint> isolate_and_refine(double a, const Strip& strip,
                                               Rect box) const {
    for (int guard = 0; guard < 200; ++guard) {
      const double height = box.t_hi - box.t_lo;
      const double width = box.sigma_hi - box.sigma_lo;
      if (height <= cfg_.isolation_height && width <= 2 * cfg_.isolation_height) {
        if (auto g = newton(a, strip, box)) return g;
      }
      if (height > width) {
        const double mid = 0.5 * (box.t_lo + box.t_hi);
        const Winding lower = winding_number({box.sigma_lo, box.sigma_hi, box.t_lo, mid}, a);
        if (lower.count >= 1) {
          box = lower.rect;
        } else {
          box = {box.sigma_lo, box.sigma_hi, lower.rect.t_hi, box.t_hi};
        }
      } else {
        const double mid = 0.5 * (box.sigma_lo + box.sigma_hi);
        const Winding left = winding_number({box.sigma_lo, mid, box.t_lo, box.t_hi}, a);
        if (left.count >= 1) {
          box = left.rect;
        } else {
          box = {left.rect.sigma_hi, box.sigma_hi, box.t_lo, box.t_hi};
        }
      }
      if (box.t_hi - box.t_lo < 1e-9) break;
    }
    return std::nullopt;
  }

  std::optional<GraftPoint> newton(double a, const Strip& strip,
                                   const Rect& box) const {
    Complex w(0.5 * (box.sigma_lo + box.sigma_hi), 0.5 * (box.t_lo + box.t_hi));
    for (int it = 0; it < cfg_.newton_max_iterations; ++it) {
      const Complex f = shifted(w, a);
      const Complex step = f / engine_.zeta_derivative(w);
      w -= step;
      if (!detail::all_finite(w) || w.real() <= 0.0 || w.real() > 3.0) {
        return std::nullopt;
      }
      if (std::abs(step) <= 1e-14 * std::abs(w)) break;
    }
    const Complex value = engine_.zeta_strip(w);
    const double residual = std::abs(value - a);
    const double margin = 1e-9;
    const bool in_box = w.real() > box.sigma_lo - margin &&
                        w.real() < box.sigma_hi + margin &&
                        w.imag() > box.t_lo - margin && w.imag() < box.t_hi + margin;
    if (!in_box || !strip.contains(w.real()) || residual > cfg_.root_tol) {
      return std::nullopt;
    }
    GraftPoint g;
    g.w = w;
    g.a_target = a;
    g.strip_index = strip.index;
    g.residual = residual;
    g.t_found = w.imag();
    g.modulus = std::abs(value);
    g.verify_residual = std::abs(verifier_.zeta_strip(w) - a);
    return g;
  }

  ZetaEngine engine_;
  ZetaEngine verifier_;
  BohrConfig cfg_;
};

}  // namespace zll
