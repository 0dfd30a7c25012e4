#pragma once

#include <array>
#include <cmath>
#include <string>

#include "zll/error.hpp"

namespace zll {

struct IntegralResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  long evaluations = 0;
};

inline constexpr double kDefaultQuadratureTol = 1e-9;
inline constexpr int kDefaultMaxDepth = 40;

namespace detail {

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half) and weights.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the Kronrod nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
void gauss_kronrod_15(F& f, double a, double b, double& kronrod,
                      double& error) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double k = fc * kKronrodWeights[7];
  double g = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(centre - dx) + f(centre + dx);
    k += kKronrodWeights[i] * pair;
    if (i % 2 == 1) g += kGaussWeights[i / 2] * pair;
  }
  kronrod = k * half;
  error = std::abs((k - g) * half);
}

template <class F>
void adapt(F& f, double a, double b, double tol, int depth, int max_depth,
           IntegralResult& acc) {
  double value, error;
  gauss_kronrod_15(f, a, b, value, error);
  acc.evaluations += 15;
  if (!std::isfinite(value)) {
    throw NonConvergence("non-finite integrand on [" + std::to_string(a) +
                         ", " + std::to_string(b) + "]");
  }
  if (error <= tol) {
    acc.value += value;
    acc.abs_error_estimate += error;
    return;
  }
  if (depth >= max_depth) {
    throw NonConvergence("subdivision depth limit reached near " +
                         std::to_string(a));
  }
  const double mid = 0.5 * (a + b);
  adapt(f, a, mid, 0.5 * tol, depth + 1, max_depth, acc);
  adapt(f, mid, b, 0.5 * tol, depth + 1, max_depth, acc);
}

}  // namespace detail

// Adaptive bisection on a 15-point Gauss-Kronrod rule; the absolute
// tolerance is split evenly across the two halves of every refined panel.
template <class F>
IntegralResult integrate(F&& f, double a, double b,
                         double tol = kDefaultQuadratureTol,
                         int max_depth = kDefaultMaxDepth) {
  if (!(a < b)) throw DomainError("integrate requires a < b");
  if (!(tol > 0)) throw DomainError("integrate requires tol > 0");
  IntegralResult acc;
  detail::adapt(f, a, b, tol, 0, max_depth, acc);
  return acc;
}

}  // namespace zll
