#pragma once

// Riemann zeta-function on the critical line (Hardy Z via Riemann-Siegel)
// and in the strip 0 < re(s) <= 3 (Euler-Maclaurin summation).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "zll/error.hpp"
#include "zll/riemann_siegel_coefficients.hpp"

namespace zll {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;

struct EngineConfig {
  double target_rel_error = 1e-10;
  // Number of Bernoulli correction terms B_2 .. B_{2M} in Euler-Maclaurin.
  int euler_maclaurin_terms = 12;
  // Euler-Maclaurin main-sum length is max(main_sum_floor, ceil(scale*|t|)).
  int main_sum_floor = 20;
  double main_sum_scale = 1.0;
  int riemann_siegel_correction_order = 4;
  // On the critical line Riemann-Siegel is used for t >= crossover_t.
  double crossover_t = 500.0;
  double t_max = 1e5;

  void validate() const {
    if (!(target_rel_error > 0)) {
      throw ConfigError("engine.target_rel_error must be > 0");
    }
    if (riemann_siegel_correction_order < 0 ||
        riemann_siegel_correction_order > 4) {
      throw ConfigError("engine.riemann_siegel_correction_order must be in 0..4");
    }
    if (euler_maclaurin_terms < 1 || euler_maclaurin_terms > 60) {
      throw ConfigError("engine.euler_maclaurin_terms must be in 1..60");
    }
    if (main_sum_floor < 2 || !(main_sum_scale >= 1.0)) {
      throw ConfigError("engine main-sum parameters out of range");
    }
    if (!(crossover_t >= 50.0)) {
      throw ConfigError("engine.crossover_t must be >= 50");
    }
    if (!(t_max > 0)) throw ConfigError("engine.t_max must be > 0");
  }

  // Twice the main-sum length and twice the Bernoulli order. Used for
  // independent re-verification of roots.
  EngineConfig doubled() const {
    EngineConfig c = *this;
    c.euler_maclaurin_terms = std::min(60, 2 * euler_maclaurin_terms);
    c.main_sum_floor = 2 * main_sum_floor;
    c.main_sum_scale = 2.0 * main_sum_scale;
    return c;
  }

  bool operator==(const EngineConfig&) const = default;
};

template <class T>
struct Estimate {
  T value{};
  double error_estimate = 0.0;  // absolute truncation estimate
  bool warning = false;         // estimate exceeds target_rel_error
};

namespace detail {

// B_{2j} / (2j)! for j = 0..60, from 2 (-1)^{j+1} zeta(2j) / (2 pi)^{2j}.
inline const std::array<double, 61>& bernoulli_over_factorial() {
  static const std::array<double, 61> table = [] {
    std::array<double, 61> b{};
    b[0] = 1.0;
    for (int j = 1; j <= 60; ++j) {
      double zeta2j;
      if (j == 1) {
        zeta2j = kPi * kPi / 6.0;
      } else {
        const int n_max = 1000;
        const double p = 2.0 * j;
        double s = 0.0;
        for (int n = n_max; n >= 1; --n) s += std::pow(n, -p);
        // tail beyond n_max by Euler-Maclaurin on the integrand x^{-p}
        const double N = n_max;
        s += std::pow(N, 1 - p) / (p - 1) - 0.5 * std::pow(N, -p) +
             p * std::pow(N, -p - 1) / 12.0;
        zeta2j = s;
      }
      const double sign = (j % 2 == 1) ? 1.0 : -1.0;
      b[j] = sign * 2.0 * zeta2j * std::pow(kTwoPi, -2.0 * j);
    }
    return b;
  }();
  return table;
}

template <std::size_t N>
double horner(const std::array<double, N>& c, double z) {
  double acc = 0.0;
  for (std::size_t i = N; i-- > 0;) acc = acc * z + c[i];
  return acc;
}

// Bounds on the Riemann-Siegel remainder after correction order K, in units
// of t^{-(2K+3)/4}.
inline constexpr std::array<double, 5> kRiemannSiegelErrorConstant = {
    0.127, 0.053, 0.011, 0.031, 0.017};

inline bool all_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace detail

class ZetaEngine {
 public:
  explicit ZetaEngine(EngineConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  const EngineConfig& config() const noexcept { return cfg_; }

  // Riemann-Siegel theta from its asymptotic series.
  static double theta(double t) {
    if (!(t >= 1.0)) throw DomainError("theta requires t >= 1");
    const double t3 = t * t * t;
    return 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - kPi / 8.0 +
           1.0 / (48.0 * t) + 7.0 / (5760.0 * t3);
  }

  Estimate<double> hardy_z_estimate(double t) const {
    if (!(t >= 1.0)) throw DomainError("hardy_z requires t >= 1");
    check_height(t);
    if (t >= cfg_.crossover_t) return riemann_siegel(t);
    const Estimate<Complex> z = euler_maclaurin(Complex(0.5, t), cfg_);
    const double rotated = (std::exp(Complex(0.0, theta(t))) * z.value).real();
    const double modulus = std::abs(z.value);
    return {rotated < 0 ? -modulus : modulus, z.error_estimate, z.warning};
  }

  double hardy_z(double t) const { return hardy_z_estimate(t).value; }

  // zeta(1/2 + it) = exp(-i theta(t)) Z(t).
  Complex zeta_critical_line(double t) const {
    if (!(t >= 1.0)) throw DomainError("zeta_critical_line requires t >= 1");
    check_height(t);
    if (t < cfg_.crossover_t) {
      return euler_maclaurin(Complex(0.5, t), cfg_).value;
    }
    return std::exp(Complex(0.0, -theta(t))) * riemann_siegel(t).value;
  }

  // |zeta(1/2 + it)|^2 for every t >= 0, consistent with hardy_z(t)^2.
  double z_squared(double t) const {
    const double at = std::abs(t);
    if (at >= 1.0) {
      const double z = hardy_z(at);
      return z * z;
    }
    return std::norm(euler_maclaurin(Complex(0.5, at), cfg_).value);
  }

  Estimate<Complex> zeta_strip_estimate(Complex s) const {
    check_strip(s);
    return euler_maclaurin(s, cfg_);
  }

  Complex zeta_strip(Complex s) const { return zeta_strip_estimate(s).value; }

  Complex zeta_derivative(Complex s) const {
    check_strip(s);
    return euler_maclaurin_derivative(s, cfg_);
  }

 private:
  void check_height(double t) const {
    if (std::abs(t) > cfg_.t_max) {
      throw RangeError("|t| = " + std::to_string(t) + " exceeds engine t_max");
    }
  }

  void check_strip(Complex s) const {
    if (!detail::all_finite(s)) throw DomainError("non-finite argument");
    if (s == Complex(1.0, 0.0)) throw PoleError("zeta has a pole at s = 1");
    if (!(s.real() > 0.0 && s.real() <= 3.0)) {
      throw RangeError("re(s) outside supported window (0, 3]");
    }
    check_height(s.imag());
  }

  static int main_sum_length(Complex s, const EngineConfig& cfg) {
    return std::max(cfg.main_sum_floor,
                    static_cast<int>(std::ceil(cfg.main_sum_scale *
                                               std::abs(s.imag()))));
  }

  static Estimate<Complex> euler_maclaurin(Complex s, const EngineConfig& cfg) {
    const int n = main_sum_length(s, cfg);
    const int m = cfg.euler_maclaurin_terms;
    const auto& b = detail::bernoulli_over_factorial();

    Complex sum = 0.0;
    for (int k = n - 1; k >= 1; --k) sum += std::exp(-s * std::log(double(k)));
    const double big_n = n;
    const Complex n_pow = std::exp(-s * std::log(big_n));  // N^{-s}
    sum += big_n * n_pow / (s - 1.0) + 0.5 * n_pow;

    // T_j = b_j N^{1-s-2j} prod_{i=0}^{2j-2} (s+i)
    Complex rising = s;
    Complex n_factor = n_pow / big_n;
    Complex term = b[1] * rising * n_factor;
    for (int j = 1; j <= m; ++j) {
      sum += term;
      rising *= (s + double(2 * j - 1)) * (s + double(2 * j));
      n_factor /= big_n * big_n;
      term = b[j + 1] * rising * n_factor;
    }
    const double err = std::abs(term);
    const bool warn = err > cfg.target_rel_error * std::max(1e-300, std::abs(sum));
    return {sum, err, warn};
  }

  static Complex euler_maclaurin_derivative(Complex s, const EngineConfig& cfg) {
    const int n = main_sum_length(s, cfg);
    const int m = cfg.euler_maclaurin_terms;
    const auto& b = detail::bernoulli_over_factorial();

    Complex sum = 0.0;
    for (int k = n - 1; k >= 2; --k) {
      const double lk = std::log(double(k));
      sum -= lk * std::exp(-s * lk);
    }
    const double big_n = n;
    const double ln_n = std::log(big_n);
    const Complex n_pow = std::exp(-s * ln_n);
    const Complex sm1 = s - 1.0;
    sum += -ln_n * big_n * n_pow / sm1 - big_n * n_pow / (sm1 * sm1) -
           0.5 * ln_n * n_pow;

    Complex rising = s;
    Complex log_rising = 1.0 / s;  // d/ds log prod (s+i)
    Complex n_factor = n_pow / big_n;
    for (int j = 1; j <= m; ++j) {
      const Complex term = b[j] * rising * n_factor;
      sum += term * (log_rising - ln_n);
      const Complex a1 = s + double(2 * j - 1);
      const Complex a2 = s + double(2 * j);
      rising *= a1 * a2;
      log_rising += 1.0 / a1 + 1.0 / a2;
      n_factor /= big_n * big_n;
    }
    return sum;
  }

  Estimate<double> riemann_siegel(double t) const {
    const double a = std::sqrt(t / kTwoPi);
    const int n = static_cast<int>(std::floor(a));
    const double p = a - n;
    const double th = theta(t);

    double sum = 0.0;
    for (int k = n; k >= 1; --k) {
      sum += std::cos(th - t * std::log(double(k))) / std::sqrt(double(k));
    }

    const double z = 2.0 * p - 1.0;
    const int order = cfg_.riemann_siegel_correction_order;
    const std::array<double, 5> c = {
        detail::horner(detail::kRiemannSiegelC0, z),
        detail::horner(detail::kRiemannSiegelC1, z),
        detail::horner(detail::kRiemannSiegelC2, z),
        detail::horner(detail::kRiemannSiegelC3, z),
        detail::horner(detail::kRiemannSiegelC4, z)};
    const double w = std::sqrt(kTwoPi / t);
    double rem = 0.0;
    double wk = 1.0;
    for (int k = 0; k <= order; ++k) {
      rem += c[k] * wk;
      wk *= w;
    }
    const double sign = (n % 2 == 1) ? 1.0 : -1.0;  // (-1)^{n-1}
    const double value = 2.0 * sum + sign * std::sqrt(w) * rem;
    const double err = detail::kRiemannSiegelErrorConstant[order] *
                       std::pow(t, -(2.0 * order + 3.0) / 4.0);
    return {value, err, err > cfg_.target_rel_error * std::max(1.0, std::abs(value))};
  }

  EngineConfig cfg_;
};

}  // namespace zll
