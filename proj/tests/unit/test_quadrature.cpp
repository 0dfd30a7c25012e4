#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "zll/hardy_table.hpp"
#include "zll/quadrature.hpp"

using namespace zll;

namespace {

HardyIntegralTable& table() {
  static HardyIntegralTable t{ZetaEngine{}};
  return t;
}

}  // namespace

TEST(Integrate, Sin2MeanOverBaseSegment) {
  const double L = 100, U = kPi / 8, lo = kPi * L;
  auto f = [](double t) { double s = std::sin(t); return s * s; };
  const IntegralResult r = integrate(f, lo, lo + U, 1e-13);
  const double exact = 0.5 * U * (1 - std::sin(2 * U) / (2 * U));
  EXPECT_NEAR(r.value, exact, 1e-12);
  EXPECT_GE(r.abs_error_estimate, 0.0);
}

TEST(Integrate, Cos2tOverBaseSegment) {
  const double L = 100, U = kPi / 16, lo = kPi * L;
  const IntegralResult r = integrate([](double t) { return std::cos(2 * t); }, lo, lo + U, 1e-13);
  EXPECT_NEAR(r.value, std::sin(2 * U) / 2, 1e-12);
}

TEST(Integrate, Constant) {
  const IntegralResult r = integrate([](double) { return 2.5; }, -1.0, 3.0, 1e-12);
  EXPECT_NEAR(r.value, 10.0, 1e-13);
}

TEST(Integrate, RejectsEmptyInterval) {
  EXPECT_THROW(integrate([](double) { return 1.0; }, 1.0, 1.0, 1e-9), DomainError);
  EXPECT_THROW(integrate([](double) { return 1.0; }, 2.0, 1.0, 1e-9), DomainError);
}

TEST(Integrate, DepthLimitRaisesNonConvergence) {
  auto spiky = [](double t) { return 1.0 / std::sqrt(std::abs(t - 0.3)); };
  EXPECT_THROW(integrate(spiky, 0.0, 1.0, 1e-14, 6), NonConvergence);
}

TEST(Integrate, RefinementWithinErrorEstimates) {
  auto f = [](double t) { return std::exp(std::sin(5 * t)) * std::cos(t * t); };
  const IntegralResult a = integrate(f, 0.0, 6.0, 1e-8);
  const IntegralResult b = integrate(f, 0.0, 6.0, 5e-9);
  EXPECT_LE(std::abs(a.value - b.value), a.abs_error_estimate + b.abs_error_estimate + 1e-15);
}

TEST(HardyTable, ZeroAtOrigin) { EXPECT_EQ(table()(0.0), 0.0); }

TEST(HardyTable, Additivity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2000.0);
  const double tol = table().config().tol;
  for (int i = 0; i < 5; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    double direct = 0.0;
    for (double x = a; x < b; x += 1.0) {
      direct += table().integrate_z_squared(x, std::min(x + 1.0, b)).value;
    }
    // per-unit pieces on both sides, each within tol of a value below 10
    EXPECT_NEAR(table()(b) - table()(a), direct, 2 * (b - a + 2) * tol * 10)
        << a << " " << b;
  }
}

TEST(HardyTable, Monotone) {
  double prev = 0.0;
  for (double T = 0.0; T <= 1200.0; T += 37.3) {
    const double a = table()(T);
    EXPECT_GE(a, prev);
    prev = a;
  }
}

TEST(HardyTable, AsymptoticEnvelopeAtThousand) {
  const double T = 1000.0;
  const double asym = T * std::log(T) - (1 + std::log(kTwoPi) - 2 * kEulerGamma) * T;
  EXPECT_NEAR(table()(T) / asym, 1.0, 0.02);
}

TEST(HardyTable, OscillatoryWindowConverges) {
  const IntegralResult r = table().integrate_z_squared(1000.0, 1000.0 + kPi);
  EXPECT_TRUE(std::isfinite(r.value));
  EXPECT_GT(r.value, 0.0);
}

TEST(HardyTable, CheckpointsStrictlyIncreasingInT) {
  table()(50.0);
  const auto cps = table().checkpoints();
  ASSERT_GE(cps.size(), 2u);
  EXPECT_EQ(cps.front().first, 0.0);
  EXPECT_EQ(cps.front().second, 0.0);
  for (std::size_t i = 1; i < cps.size(); ++i) {
    EXPECT_GT(cps[i].first, cps[i - 1].first);
    EXPECT_GE(cps[i].second, cps[i - 1].second);
  }
}

TEST(HardyTable, JsonRoundTripIsExact) {
  table()(120.0);
  HardyIntegralTable fresh{ZetaEngine{}};
  EXPECT_EQ(fresh.adopt(table().to_json()), "");
  EXPECT_EQ(fresh(117.25), table()(117.25));
  EXPECT_EQ(fresh.stats().computed, 0u);
}

TEST(HardyTable, RejectsForeignEngine) {
  EngineConfig other;
  other.euler_maclaurin_terms = 10;
  HardyIntegralTable fresh{ZetaEngine{other}};
  EXPECT_NE(fresh.adopt(table().to_json()), "");
}

TEST(HardyTable, ExtensionOrderDoesNotMatter) {
  HardyIntegralTable a{ZetaEngine{}}, b{ZetaEngine{}};
  a(80.0);
  a(40.0);
  b(40.0);
  b(80.0);
  EXPECT_EQ(a.checkpoints(), b.checkpoints());
}
