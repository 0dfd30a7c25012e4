#pragma once

// Complete hybrid formulas, Bohr grafts and the meta-functional equations
// built from them.
//
// Notation per bundle (fixed L, U, k-triple):
//   P_l  = prod_r Ztilde^2(alpha_r^l) / Ztilde^2(beta_r)   (exact)
//   Q_l  = prod_r |zeta(1/2 + i alpha_r^l)|^2 / |zeta(1/2 + i beta_r)|^2
//   c_1 = sin^2 alpha_0^1, c_2 = cos^2 alpha_0^2, c_3 = cos 2 alpha_0^3
//   m_l = |zeta(w_l)| for the graft w_l with zeta(w_l) = c_l.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "zll/bohr.hpp"
#include "zll/error.hpp"
#include "zll/factorization.hpp"
#include "zll/identity_report.hpp"

namespace zll {

struct MetaOptions {
  double cert_tol = 1e-6;
  double envelope = 0.05;
};

struct KTriple {
  int k1 = 2, k2 = 2, k3 = 2;
  bool equal() const { return k1 == k2 && k2 == k3; }
};

struct CertificateSet {
  FactorizationCertificate sin2;
  FactorizationCertificate cos2;
  FactorizationCertificate cos2t;
};

namespace detail {

inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string digest(const FactorizationCertificate& c) {
  return c.f.name + "(L=" + std::to_string(c.L) + ",U=" + fmt_double(c.U) +
         ",k=" + std::to_string(c.k) + ")";
}

inline std::string digest(const GraftPoint& g) {
  return "w" + std::to_string(g.strip_index) + "=" + fmt_double(g.w.real()) + "+" +
         fmt_double(g.w.imag()) + "i";
}

inline void require_tag(const FactorizationCertificate& c, FunctionTag tag) {
  if (c.f.tag != tag) {
    throw MismatchedInputs(std::string("expected a ") + to_string(tag) +
                           " certificate, got " + c.f.name);
  }
}

inline void require_shared(const FactorizationCertificate& a, const FactorizationCertificate& b) {
  if (a.L != b.L || a.U != b.U) {
    throw MismatchedInputs("certificates differ in (L, U): " + digest(a) + " vs " + digest(b));
  }
  if (!(a.U < kPi / 4)) throw MismatchedInputs("hybrid formulas require U < pi/4");
}

}  // namespace detail

inline IdentityReport assemble_echf1(const FactorizationCertificate& c1,
                                     const FactorizationCertificate& c2,
                                     const MetaOptions& o = {}) {
  detail::require_tag(c1, FunctionTag::kSin2);
  detail::require_tag(c2, FunctionTag::kCos2);
  detail::require_shared(c1, c2);
  const double lhs = c1.lhs_product * c1.cofactor() + c2.lhs_product * c2.cofactor();
  return make_report(EquationId::kEchf1_3_2, lhs, 1.0, o.cert_tol,
                     detail::digest(c1) + ";" + detail::digest(c2));
}

inline IdentityReport assemble_diff(const FactorizationCertificate& c1,
                                    const FactorizationCertificate& c2,
                                    const MetaOptions& o = {}) {
  detail::require_tag(c1, FunctionTag::kSin2);
  detail::require_tag(c2, FunctionTag::kCos2);
  detail::require_shared(c1, c2);
  const double lhs = c2.lhs_product * c2.cofactor() - c1.lhs_product * c1.cofactor();
  const double U = c1.U;
  return make_report(EquationId::kDiff_3_5, lhs, std::sin(2 * U) / (2 * U), o.cert_tol,
                     detail::digest(c1) + ";" + detail::digest(c2));
}

inline IdentityReport assemble_echf2(const FactorizationCertificate& c1,
                                     const FactorizationCertificate& c2,
                                     const FactorizationCertificate& c3,
                                     const MetaOptions& o = {}) {
  detail::require_tag(c1, FunctionTag::kSin2);
  detail::require_tag(c2, FunctionTag::kCos2);
  detail::require_tag(c3, FunctionTag::kCos2t);
  detail::require_shared(c1, c2);
  detail::require_shared(c1, c3);
  const double lhs = c2.lhs_product * c2.cofactor() - c1.lhs_product * c1.cofactor();
  const double rhs = c3.lhs_product * c3.cofactor();
  return make_report(EquationId::kEchf2_3_6, lhs, rhs, o.cert_tol,
                     detail::digest(c1) + ";" + detail::digest(c2) + ";" + detail::digest(c3));
}

enum class AchfVariant { kAchf1, kAchf2 };

inline IdentityReport assemble_achf(const CertificateSet& cs, AchfVariant v,
                                    const MetaOptions& o = {}) {
  const auto& c1 = cs.sin2;
  const auto& c2 = cs.cos2;
  const auto& c3 = cs.cos2t;
  detail::require_tag(c1, FunctionTag::kSin2);
  detail::require_tag(c2, FunctionTag::kCos2);
  detail::require_shared(c1, c2);
  const double t1 = c1.zeta_ratio() * c1.cofactor();
  const double t2 = c2.zeta_ratio() * c2.cofactor();
  if (v == AchfVariant::kAchf1) {
    return make_report(EquationId::kAchf1_3_3, t1 + t2, 1.0, o.envelope,
                       detail::digest(c1) + ";" + detail::digest(c2));
  }
  detail::require_tag(c3, FunctionTag::kCos2t);
  detail::require_shared(c1, c3);
  return make_report(EquationId::kAchf2_3_7, t2 - t1, c3.zeta_ratio() * c3.cofactor(),
                     o.envelope,
                     detail::digest(c1) + ";" + detail::digest(c2) + ";" + detail::digest(c3));
}

// The hybrid block of one bundle: ECHF1, DIFF, ECHF2, ACHF1, ACHF2.
inline std::vector<IdentityReport> hybrid_reports(const CertificateSet& cs,
                                                  const MetaOptions& o = {}) {
  return {assemble_echf1(cs.sin2, cs.cos2, o), assemble_diff(cs.sin2, cs.cos2, o),
          assemble_echf2(cs.sin2, cs.cos2, cs.cos2t, o),
          assemble_achf(cs, AchfVariant::kAchf1, o), assemble_achf(cs, AchfVariant::kAchf2, o)};
}

struct UGrid {
  std::vector<double> values;
  double min_gap = 1e-6;

  // False when min_gap is below the binary64 spacing near pi/4, where the
  // gap checks are vacuous.
  bool gap_enforceable() const {
    const double q = kPi / 4;
    return min_gap >= std::nextafter(q, 1.0) - q;
  }

  void validate() const {
    if (values.empty()) throw ConfigError("U grid is empty");
    if (!(min_gap > 0)) throw ConfigError("U grid min_gap must be > 0");
    if (!(values.front() > min_gap)) throw ConfigError("U grid: U_1 <= min_gap");
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (!(values[i] - values[i - 1] > min_gap)) {
        throw ConfigError("U grid: gap between U_" + std::to_string(i) + " and U_" +
                          std::to_string(i + 1) + " not above min_gap");
      }
    }
    if (!(kPi / 4 - values.back() > min_gap)) {
      throw ConfigError("U grid: pi/4 - U_n0 not above min_gap");
    }
  }
};

struct GraftSet {
  int n = 0;
  long L = 0;
  double U = 0.0;
  CertificateSet certs;
  std::array<double, 3> a_values{};
  std::array<std::optional<GraftPoint>, 3> grafts;
  std::vector<std::string> failures;

  bool complete() const {
    return std::all_of(grafts.begin(), grafts.end(), [](const auto& g) { return g.has_value(); });
  }
  const GraftPoint& w(int l) const { return *grafts.at(static_cast<std::size_t>(l - 1)); }
};

inline std::array<double, 3> a_values_of(const CertificateSet& cs) {
  return {cs.sin2.cofactor(), cs.cos2.cofactor(), cs.cos2t.cofactor()};
}

// One Bohr root per strip: w_l is the lowest root of zeta(w) = a_l in S^l.
// A missing root is recorded in `failures`; the other strips still run.
inline GraftSet graft(const CertificateSet& cs, const StripLayout& layout,
                      const BohrSolver& solver, int n = 0) {
  detail::require_shared(cs.sin2, cs.cos2);
  detail::require_shared(cs.sin2, cs.cos2t);
  GraftSet gs;
  gs.n = n;
  gs.L = cs.sin2.L;
  gs.U = cs.sin2.U;
  gs.certs = cs;
  gs.a_values = a_values_of(cs);
  for (int l = 1; l <= 3; ++l) {
    const double a = gs.a_values[l - 1];
    if (!(a > 0.0 && a < 1.0)) {
      gs.failures.push_back("strip " + std::to_string(l) + ": a = " + detail::fmt_double(a) +
                            " outside (0, 1)");
      continue;
    }
    try {
      gs.grafts[l - 1] = solver.find_a_point(a, layout.strip(l));
    } catch (const Error& e) {
      gs.failures.push_back("strip " + std::to_string(l) + ": " + e.kind() + ": " + e.what());
    }
  }
  return gs;
}

namespace detail {

inline void require_complete(const GraftSet& gs) {
  if (!gs.complete()) throw MismatchedInputs("graft set is incomplete");
}

inline std::string digest(const GraftSet& gs) {
  return digest(gs.certs.sin2) + ";" + digest(gs.certs.cos2) + ";" + digest(gs.certs.cos2t) +
         ";" + digest(gs.w(1)) + ";" + digest(gs.w(2)) + ";" + digest(gs.w(3));
}

}  // namespace detail

// THM1, THM2, and THM2 as literally printed (|zeta(w_1)| in both terms).
inline std::vector<IdentityReport> meta_exact(const GraftSet& gs, const MetaOptions& o = {}) {
  detail::require_complete(gs);
  const auto& cs = gs.certs;
  const double p1 = cs.sin2.lhs_product, p2 = cs.cos2.lhs_product, p3 = cs.cos2t.lhs_product;
  const double m1 = gs.w(1).modulus, m2 = gs.w(2).modulus, m3 = gs.w(3).modulus;
  const std::string d = detail::digest(gs);
  return {make_report(EquationId::kThm1_4_19, p2 * m2 - p1 * m1, p3 * m3, o.cert_tol, d),
          make_report(EquationId::kThm2_4_21, p1 * m1 + p2 * m2, 1.0, o.cert_tol, d),
          make_report(EquationId::kThm2_4_21, p1 * m1 + p2 * m1, 1.0, o.cert_tol, d, "literal")};
}

inline std::vector<IdentityReport> meta_asymptotic(const GraftSet& gs,
                                                   const MetaOptions& o = {}) {
  detail::require_complete(gs);
  const auto& cs = gs.certs;
  const double q1 = cs.sin2.zeta_ratio(), q2 = cs.cos2.zeta_ratio(), q3 = cs.cos2t.zeta_ratio();
  const double m1 = gs.w(1).modulus, m2 = gs.w(2).modulus, m3 = gs.w(3).modulus;
  const std::string d = detail::digest(gs);
  const double e = o.envelope;
  return {make_report(EquationId::kCor1_5_1, q1 * m1 + q2 * m2, 1.0, e, d),
          make_report(EquationId::kCor2_5_2, q2 * m2 - q1 * m1, q3 * m3, e, d),
          make_report(EquationId::kCor3_5_3, q2 * m2, 0.5 + 0.5 * q3 * m3, e, d),
          make_report(EquationId::kCor4_5_4, q1 * m1, 0.5 - 0.5 * q3 * m3, e, d)};
}

// Denominator-free form for k1 = k2 = k3. The beta products of the three
// certificates coincide, so this is COR2 multiplied through by that common
// product; the tolerance is scaled the same way. For k = 1 the form with
// alpha_1^3 in the second term is reported as well.
inline std::vector<IdentityReport> meta_secondary(const GraftSet& gs, const MetaOptions& o = {}) {
  detail::require_complete(gs);
  const auto& cs = gs.certs;
  if (!(cs.sin2.k == cs.cos2.k && cs.cos2.k == cs.cos2t.k)) {
    throw MismatchedInputs("secondary equation requires k1 = k2 = k3");
  }
  if (cs.sin2.betas != cs.cos2.betas || cs.sin2.betas != cs.cos2t.betas) {
    throw MismatchedInputs("beta vectors differ between certificates");
  }
  const double b = cs.sin2.zeta_sq_beta_product;
  const double a1 = cs.sin2.zeta_sq_alpha_product, a2 = cs.cos2.zeta_sq_alpha_product,
               a3 = cs.cos2t.zeta_sq_alpha_product;
  const double m1 = gs.w(1).modulus, m2 = gs.w(2).modulus, m3 = gs.w(3).modulus;
  const std::string d = detail::digest(gs);
  std::vector<IdentityReport> out = {
      make_report(EquationId::kSec_5_6, a2 * m2 - a1 * m1, a3 * m3, o.envelope * b, d)};
  if (cs.sin2.k == 1) {
    out.push_back(make_report(EquationId::kSec_5_6, a2 * m2 - a3 * m1, a3 * m3, o.envelope * b,
                              d, "literal_1_2"));
  }
  return out;
}

// Certificate re-verification as reports, one per function.
inline IdentityReport certificate_report(const FactorizationCertificate& c,
                                         const LadderTable& lt) {
  const CertificateCheck chk = verify_certificate(c, lt);
  EquationId id = EquationId::kFactUnit;
  switch (c.f.tag) {
    case FunctionTag::kSin2: id = EquationId::kFact_2_3; break;
    case FunctionTag::kCos2: id = EquationId::kFact_2_8; break;
    case FunctionTag::kCos2t: id = EquationId::kFact_2_12; break;
    default: break;
  }
  IdentityReport r = make_report(id, chk.lhs, chk.rhs, chk.tolerance, detail::digest(c));
  r.pass = r.pass && chk.membership;
  return r;
}

struct ReportBundle {
  int n = 0;
  long L = 0;
  double U = 0.0;
  KTriple k;
  std::vector<FactorizationCertificate> certificates;
  std::vector<GraftPoint> grafts;
  std::vector<IdentityReport> reports;
  std::vector<std::string> failures;
  bool not_found = false;

  bool ok() const {
    if (!failures.empty()) return false;
    return std::all_of(reports.begin(), reports.end(),
                       [](const IdentityReport& r) { return r.pass || !r.gating(); });
  }
  const IdentityReport* find(EquationId id, const std::string& variant = {}) const {
    for (const auto& r : reports) {
      if (r.id == id && r.variant == variant) return &r;
    }
    return nullptr;
  }
};

enum class Stage { kFactorize, kHybrid, kGraft, kMeta };

struct PipelineContext {
  const LadderTable* ladder = nullptr;
  const BohrSolver* solver = nullptr;
  StripLayout layout{};
  FactorizationOptions fact{};
  MetaOptions meta{};
};

inline CertificateSet certificate_set(long L, double U, const KTriple& k,
                                      const PipelineContext& ctx) {
  const LadderTable& lt = *ctx.ladder;
  return {factorize(FunctionId::sin2(), L, U, k.k1, lt, ctx.fact),
          factorize(FunctionId::cos2(), L, U, k.k2, lt, ctx.fact),
          factorize(FunctionId::cos2t(), L, U, k.k3, lt, ctx.fact)};
}

// Runs every stage up to `last` for one (L, U_n). Numerical failures are
// recorded on the bundle rather than thrown.
inline ReportBundle run_bundle(int n, long L, double U, const KTriple& k,
                               const PipelineContext& ctx, Stage last = Stage::kMeta) {
  ReportBundle b;
  b.n = n;
  b.L = L;
  b.U = U;
  b.k = k;
  try {
    const CertificateSet cs = certificate_set(L, U, k, ctx);
    b.certificates = {cs.sin2, cs.cos2, cs.cos2t};
    for (const auto& c : b.certificates) b.reports.push_back(certificate_report(c, *ctx.ladder));
    if (last == Stage::kFactorize) return b;
    for (auto& r : hybrid_reports(cs, ctx.meta)) b.reports.push_back(std::move(r));
    if (last == Stage::kHybrid) return b;
    const GraftSet gs = graft(cs, ctx.layout, *ctx.solver, n);
    for (const auto& g : gs.grafts) {
      if (g) b.grafts.push_back(*g);
    }
    if (!gs.complete()) {
      b.failures = gs.failures;
      b.not_found = true;
      return b;
    }
    if (last == Stage::kGraft) return b;
    for (auto& r : meta_exact(gs, ctx.meta)) b.reports.push_back(std::move(r));
    for (auto& r : meta_asymptotic(gs, ctx.meta)) b.reports.push_back(std::move(r));
    if (k.equal()) {
      for (auto& r : meta_secondary(gs, ctx.meta)) b.reports.push_back(std::move(r));
    }
  } catch (const Error& e) {
    b.failures.push_back(std::string(e.kind()) + ": " + e.what());
  }
  return b;
}

// Runs `tasks` on up to `jobs` threads; results keep input order.
template <class Task>
auto parallel_map(std::size_t count, int jobs, Task&& task)
    -> std::vector<decltype(task(std::size_t{}))> {
  std::vector<decltype(task(std::size_t{}))> out(count);
  const std::size_t workers = std::min<std::size_t>(std::max(jobs, 1), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = task(i);
    return out;
  }
  std::mutex m;
  std::size_t next = 0;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard lock(m);
          if (next >= count) return;
          i = next++;
        }
        out[i] = task(i);
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

inline std::vector<ReportBundle> scan_u_grid(const UGrid& grid, long L, const KTriple& k,
                                             const PipelineContext& ctx,
                                             Stage last = Stage::kMeta, int jobs = 1) {
  grid.validate();
  return parallel_map(grid.values.size(), jobs, [&](std::size_t i) {
    return run_bundle(static_cast<int>(i) + 1, L, grid.values[i], k, ctx, last);
  });
}

inline nlohmann::json to_json(const ReportBundle& b) {
  nlohmann::json certs = nlohmann::json::array();
  for (const auto& c : b.certificates) certs.push_back(to_json(c));
  nlohmann::json grafts = nlohmann::json::array();
  for (const auto& g : b.grafts) grafts.push_back(to_json(g));
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& r : b.reports) reports.push_back(to_json(r));
  return {{"n", b.n},
          {"L", b.L},
          {"U_n", b.U},
          {"k1", b.k.k1},
          {"k2", b.k.k2},
          {"k3", b.k.k3},
          {"certificates", std::move(certs)},
          {"grafts", std::move(grafts)},
          {"reports", std::move(reports)},
          {"failures", b.failures}};
}

}  // namespace zll
