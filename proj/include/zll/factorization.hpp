#pragma once

// Exact zeta-factorization certificates.
//
// For f on the base segment [pi L, pi L + U] and the depth-k reverse
// iterate S_k, the function
//   G(xi) = f(phi1^k(xi)) * prod_{r=0}^{k-1} Ztilde^2(phi1^r(xi))
// integrates over S_k to the integral of f over the base. Its mean-value
// point xi* and the mean-value point eta* of the f = 1 Jacobian give
//   alpha_r = phi1^{k-r}(xi*),  beta_r = phi1^{k-r}(eta*),
// and
//   prod_{r=1}^k Ztilde^2(alpha_r) / Ztilde^2(beta_r)
//       = (1 / (U f(alpha_0))) int_base f.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "zll/error.hpp"
#include "zll/ladder.hpp"
#include "zll/quadrature.hpp"

namespace zll {

enum class FunctionTag { kSin2, kCos2, kCos2t, kUnit, kCustom };

inline const char* to_string(FunctionTag t) {
  switch (t) {
    case FunctionTag::kSin2: return "SIN2";
    case FunctionTag::kCos2: return "COS2";
    case FunctionTag::kCos2t: return "COS2T";
    case FunctionTag::kUnit: return "UNIT";
    case FunctionTag::kCustom: return "CUSTOM";
  }
  return "?";
}

struct FunctionId {
  FunctionTag tag = FunctionTag::kUnit;
  double u_max = kPi / 2;
  std::function<double(double)> evaluator;
  std::string name;

  double operator()(double t) const { return evaluator(t); }

  static FunctionId sin2() {
    return {FunctionTag::kSin2, kPi / 2, [](double t) { double s = std::sin(t); return s * s; }, "SIN2"};
  }
  static FunctionId cos2() {
    return {FunctionTag::kCos2, kPi / 2, [](double t) { double c = std::cos(t); return c * c; }, "COS2"};
  }
  static FunctionId cos2t() {
    return {FunctionTag::kCos2t, kPi / 4, [](double t) { return std::cos(2 * t); }, "COS2T"};
  }
  static FunctionId unit() {
    return {FunctionTag::kUnit, kPi / 2, [](double) { return 1.0; }, "UNIT"};
  }
  static FunctionId custom(std::string name, double u_max, std::function<double(double)> f) {
    if (!(u_max > 0)) throw ConfigError("CUSTOM function must supply u_max > 0");
    return {FunctionTag::kCustom, u_max, std::move(f), std::move(name)};
  }
  static FunctionId from_tag(const std::string& tag) {
    if (tag == "SIN2") return sin2();
    if (tag == "COS2") return cos2();
    if (tag == "COS2T") return cos2t();
    if (tag == "UNIT") return unit();
    throw ConfigError("unknown function tag " + tag);
  }
};

// (1/U) int_{pi L}^{pi L + U} f in closed form; nullopt-like NaN for CUSTOM.
inline double closed_form_mean(FunctionTag tag, double U) {
  const double sinc = std::sin(2 * U) / (2 * U);
  switch (tag) {
    case FunctionTag::kSin2: return 0.5 * (1 - sinc);
    case FunctionTag::kCos2: return 0.5 * (1 + sinc);
    case FunctionTag::kCos2t: return sinc;
    case FunctionTag::kUnit: return 1.0;
    case FunctionTag::kCustom: break;
  }
  return std::nan("");
}

struct MeanValueOptions {
  int cells = 1024;
  double quad_tol = 1e-10;
  // Which bracketing cell to refine, counted from the left.
  int skip_brackets = 0;
};

struct MeanValuePoint {
  double xi = 0.0;
  double mean = 0.0;
  int multiplicity = 0;  // sign changes of g - mean seen on the scan grid
  int cells_used = 0;
};

// A point of `seg` where g equals its mean over `seg`, to
// |g(xi) - mean| <= tol (1 + |mean|). Leftmost bracket on a uniform grid,
// refined by bisection. A constant g returns the midpoint.
template <class G>
MeanValuePoint mean_value_point(G&& g, const Segment& seg, double tol,
                                MeanValueOptions opts = {}) {
  if (!(seg.lo < seg.hi)) throw DomainError("mean_value_point: empty segment");
  const double len = seg.length();
  const double mean = integrate(g, seg.lo, seg.hi, opts.quad_tol).value / len;
  const double thr = tol * (1.0 + std::abs(mean));

  for (int attempt = 0; attempt < 2; ++attempt) {
    const int cells = opts.cells << (2 * attempt);
    const double h = len / cells;
    std::vector<double> d(static_cast<std::size_t>(cells) + 1);
    bool constant = true;
    for (int i = 0; i <= cells; ++i) {
      const double x = (i == cells) ? seg.hi : seg.lo + i * h;
      d[i] = g(x) - mean;
      constant = constant && std::abs(d[i]) <= thr;
    }
    if (constant) return {0.5 * (seg.lo + seg.hi), mean, 0, cells};

    int multiplicity = 0;
    for (int i = 0; i < cells; ++i) {
      if ((d[i] < 0) != (d[i + 1] < 0)) ++multiplicity;
    }
    int seen = 0;
    for (int i = 0; i < cells; ++i) {
      if ((d[i] < 0) == (d[i + 1] < 0)) continue;
      if (seen++ < opts.skip_brackets) continue;
      double a = seg.lo + i * h;
      double b = (i + 1 == cells) ? seg.hi : seg.lo + (i + 1) * h;
      double da = d[i];
      if (std::abs(d[i + 1]) <= thr && std::abs(d[i + 1]) < std::abs(da)) {
        return {b, mean, multiplicity, cells};
      }
      if (std::abs(da) <= thr) return {a, mean, multiplicity, cells};
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double dm = g(m) - mean;
        if (std::abs(dm) <= thr || m == a || m == b) {
          return {m, mean, multiplicity, cells};
        }
        if ((dm < 0) == (da < 0)) {
          a = m;
          da = dm;
        } else {
          b = m;
        }
      }
      return {0.5 * (a + b), mean, multiplicity, cells};
    }
  }
  throw NoBracket("mean_value_point: no sign change of g - mean on [" +
                  std::to_string(seg.lo) + ", " + std::to_string(seg.hi) + "]");
}

struct FactorizationOptions {
  double cert_tol = 1e-6;
  double mvp_tol = 1e-12;
  int k0 = 5;
  MeanValueOptions mvp{};
  double degenerate_eps = 1e-12;
  int max_bracket_retries = 8;
};

struct FactorizationCertificate {
  FunctionId f;
  long L = 0;
  double U = 0.0;
  int k = 0;
  SegmentChain chain;
  std::vector<double> alphas;  // alpha_0 .. alpha_k
  std::vector<double> betas;   // beta_1 .. beta_k (betas[r-1] = beta_r)
  double xi_star = 0.0;
  double eta_star = 0.0;
  double lhs_product = 0.0;
  double rhs_closed_form = 0.0;
  // prod |zeta(1/2 + i alpha_r)|^2 and prod |zeta(1/2 + i beta_r)|^2, r >= 1
  double zeta_sq_alpha_product = 0.0;
  double zeta_sq_beta_product = 0.0;
  double residual = 0.0;
  int ivt_multiplicity = 0;
  double cert_tol = 1e-6;

  double alpha0() const { return alphas.front(); }
  // The |zeta|^2 counterpart of lhs_product.
  double zeta_ratio() const { return zeta_sq_alpha_product / zeta_sq_beta_product; }
  // f(alpha_0), the trigonometric cofactor of the product.
  double cofactor() const { return f(alphas.front()); }
  bool pass() const { return residual <= cert_tol; }
};

namespace detail {

inline void validate_factorize_args(const FunctionId& f, long L, double U, int k,
                                    const LadderTable& lt,
                                    const FactorizationOptions& o) {
  if (!(double(L) >= lt.config().L0)) {
    throw DomainError("factorize requires L >= L0");
  }
  if (!(U > 0.0 && U < f.u_max)) {
    throw DomainError(std::string("factorize requires 0 < U < u_max for ") + f.name);
  }
  if (k < 1 || k > o.k0) throw DomainError("factorize requires 1 <= k <= k0");
  if (!f.evaluator) throw DomainError("factorize: function has no evaluator");
}

inline double denominator_of(const FunctionId& f, double alpha0) { return f(alpha0); }

}  // namespace detail

// prod_{r=1}^k Ztilde^2(alpha_r) / Ztilde^2(beta_r), each factor evaluated
// afresh (one phi1 call per omega).
inline double ratio_product(const LadderTable& lt, const std::vector<double>& alphas,
                            const std::vector<double>& betas) {
  double p = 1.0;
  for (std::size_t r = 1; r < alphas.size(); ++r) {
    p *= lt.z_tilde_sq(alphas[r]) / lt.z_tilde_sq(betas[r - 1]);
  }
  return p;
}

// Same with |zeta(1/2 + i t)|^2 in place of Ztilde^2.
inline double zeta_ratio_product(const LadderTable& lt, const std::vector<double>& alphas,
                                 const std::vector<double>& betas) {
  const auto& hardy = lt.hardy();
  double p = 1.0;
  for (std::size_t r = 1; r < alphas.size(); ++r) {
    p *= hardy.integrand(alphas[r]) / hardy.integrand(betas[r - 1]);
  }
  return p;
}

inline FactorizationCertificate factorize(const FunctionId& f, long L, double U, int k,
                                          const LadderTable& lt,
                                          const FactorizationOptions& opts = {}) {
  detail::validate_factorize_args(f, L, U, k, lt, opts);
  FactorizationCertificate c;
  c.f = f;
  c.L = L;
  c.U = U;
  c.k = k;
  c.cert_tol = opts.cert_tol;
  c.chain = lt.reverse_chain(L, U, k);
  const Segment top = c.chain.at(k);

  auto jacobian = [&](double xi) { return lt.orbit(xi, k).jacobian; };
  auto weighted = [&](double xi) {
    const LadderOrbit o = lt.orbit(xi, k);
    return f(o.points.back()) * o.jacobian;
  };

  const MeanValuePoint eta = mean_value_point(jacobian, top, opts.mvp_tol, opts.mvp);
  c.eta_star = eta.xi;
  const LadderOrbit beta_orbit = lt.orbit(eta.xi, k);
  c.betas.resize(static_cast<std::size_t>(k));
  for (int r = 1; r <= k; ++r) c.betas[r - 1] = beta_orbit.points[k - r];

  MeanValueOptions mvp = opts.mvp;
  for (int retry = 0;; ++retry) {
    MeanValuePoint xi = eta;
    if (f.tag != FunctionTag::kUnit || retry > 0) {
      try {
        xi = mean_value_point(weighted, top, opts.mvp_tol, mvp);
      } catch (const NoBracket&) {
        if (retry == 0) throw;
        throw DegenerateDenominator("f(alpha_0) vanishes at every bracket of the scan");
      }
    }
    const LadderOrbit alpha_orbit = lt.orbit(xi.xi, k);
    std::vector<double> alphas(static_cast<std::size_t>(k) + 1);
    for (int r = 0; r <= k; ++r) alphas[r] = alpha_orbit.points[k - r];
    const double denom = detail::denominator_of(f, alphas[0]);
    if (std::abs(denom) <= opts.degenerate_eps) {
      if (retry >= opts.max_bracket_retries) {
        throw DegenerateDenominator("f(alpha_0) vanishes for every tried bracket");
      }
      mvp.skip_brackets = retry + 1;
      continue;
    }
    c.xi_star = xi.xi;
    c.ivt_multiplicity = xi.multiplicity;
    c.alphas = std::move(alphas);
    break;
  }

  c.lhs_product = ratio_product(lt, c.alphas, c.betas);
  c.zeta_sq_alpha_product = 1.0;
  c.zeta_sq_beta_product = 1.0;
  for (int r = 1; r <= k; ++r) {
    c.zeta_sq_alpha_product *= lt.hardy().integrand(c.alphas[r]);
    c.zeta_sq_beta_product *= lt.hardy().integrand(c.betas[r - 1]);
  }
  double mean = closed_form_mean(f.tag, U);
  if (f.tag == FunctionTag::kCustom) {
    mean = integrate(f.evaluator, kPi * double(L), kPi * double(L) + U, opts.mvp.quad_tol).value / U;
  }
  c.rhs_closed_form = mean / c.cofactor();
  c.residual = std::abs(c.lhs_product - c.rhs_closed_form);
  return c;
}

struct CertificateCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double tolerance = 0.0;
  bool membership = false;
  bool pass = false;
  std::string note;
};

// Re-derives both sides from scratch: a fresh segment chain for the
// membership test, fresh Ztilde^2 values for the product, and quadrature of
// f over the base instead of the closed form.
inline CertificateCheck verify_certificate(const FactorizationCertificate& c,
                                           const LadderTable& lt) {
  CertificateCheck out;
  out.tolerance = c.cert_tol;
  if (c.alphas.size() != static_cast<std::size_t>(c.k) + 1 ||
      c.betas.size() != static_cast<std::size_t>(c.k)) {
    out.note = "malformed certificate";
    return out;
  }
  const SegmentChain chain = lt.reverse_chain(c.L, c.U, c.k);
  bool inside = chain.base().contains_open(c.alphas[0]);
  for (int r = 1; r <= c.k; ++r) {
    inside = inside && chain.at(r).contains_open(c.alphas[r]) &&
             chain.at(r).contains_open(c.betas[r - 1]);
  }
  out.membership = inside;
  out.lhs = ratio_product(lt, c.alphas, c.betas);
  const double lo = kPi * double(c.L);
  const double mean = integrate(c.f.evaluator, lo, lo + c.U, 1e-13).value / c.U;
  out.rhs = mean / c.f(c.alphas[0]);
  out.residual = std::abs(out.lhs - out.rhs);
  out.pass = inside && out.residual <= out.tolerance;
  if (!inside) out.note = "alpha/beta outside its segment";
  return out;
}

inline nlohmann::json to_json(const FactorizationCertificate& c) {
  return {{"f", c.f.name},
          {"L", c.L},
          {"U", c.U},
          {"k", c.k},
          {"alphas", c.alphas},
          {"betas", c.betas},
          {"xi_star", c.xi_star},
          {"eta_star", c.eta_star},
          {"lhs", c.lhs_product},
          {"rhs", c.rhs_closed_form},
          {"residual", c.residual},
          {"zeta_sq_alpha_product", c.zeta_sq_alpha_product},
          {"zeta_sq_beta_product", c.zeta_sq_beta_product},
          {"ivt_multiplicity", c.ivt_multiplicity}};
}

}  // namespace zll
