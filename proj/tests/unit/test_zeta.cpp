#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "zll/zeta.hpp"

using namespace zll;

namespace {

const ZetaEngine& engine() {
  static const ZetaEngine e;
  return e;
}

}  // namespace

// Reference values below come from 30-digit mpmath evaluations.

TEST(Theta, SeriesAgainstOracle) {
  EXPECT_NEAR(ZetaEngine::theta(100.0), 87.97216523178718118, 1e-9 * 87.97);
}

TEST(Theta, IncreasingAboveTen) {
  for (double t = 10.0; t < 2000.0; t += 3.7) {
    EXPECT_GT(ZetaEngine::theta(t + 1e-4) - ZetaEngine::theta(t - 1e-4), 0.0) << t;
  }
}

TEST(Theta, LogVanishesAtTwoPi) {
  const double t = kTwoPi;
  const double expect = -t / 2 - kPi / 8 + 1 / (48 * t) + 7 / (5760 * t * t * t);
  EXPECT_NEAR(ZetaEngine::theta(t), expect, 1e-15);
}

TEST(Theta, DomainBelowOne) { EXPECT_THROW(ZetaEngine::theta(0.5), DomainError); }

TEST(HardyZ, ModulusMatchesCriticalLine) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(50.0, 5000.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng);
    EXPECT_NEAR(std::abs(engine().hardy_z(t)), std::abs(engine().zeta_critical_line(t)), 1e-9);
  }
}

TEST(HardyZ, AgreesWithStripEvaluation) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(50.0, 5000.0);
  for (int i = 0; i < 100; ++i) {
    const double t = u(rng);
    const double z = engine().hardy_z(t);
    const double s = std::abs(engine().zeta_strip(Complex(0.5, t)));
    EXPECT_NEAR(s, std::abs(z), 1e-8 * (1 + std::abs(z))) << t;
  }
}

TEST(HardyZ, FirstZero) {
  double lo = 14.0, hi = 14.3;
  const double zlo = engine().hardy_z(lo);
  ASSERT_LT(zlo * engine().hardy_z(hi), 0.0);
  for (int i = 0; i < 80; ++i) {
    const double m = 0.5 * (lo + hi);
    ((engine().hardy_z(m) < 0) == (zlo < 0) ? lo : hi) = m;
  }
  EXPECT_NEAR(0.5 * (lo + hi), 14.134725141734693790, 1e-8);
}

TEST(HardyZ, SquareMatchesModulusOnGrid) {
  for (int i = 0; i < 1000; ++i) {
    const double t = 1.0 + i * 4.999;
    const double z2 = engine().z_squared(t);
    EXPECT_GE(z2, 0.0);
    EXPECT_NEAR(z2, std::norm(engine().zeta_critical_line(t)), 1e-9 * (1 + z2));
  }
}

TEST(HardyZ, DomainBelowOne) { EXPECT_THROW(engine().hardy_z(0.5), DomainError); }

TEST(CriticalLine, ValueAtThirty) {
  const Complex z = engine().zeta_critical_line(30.0);
  EXPECT_NEAR(z.real(), -0.12064228759004369991, 1e-9);
  EXPECT_NEAR(z.imag(), -0.58369121476370628876, 1e-9);
}

TEST(CriticalLine, AboveCrossoverMatchesStrip) {
  for (double t : {600.0, 1234.5, 4000.25}) {
    const Complex a = engine().zeta_critical_line(t);
    const Complex b = engine().zeta_strip(Complex(0.5, t));
    EXPECT_LT(std::abs(a - b), 1e-8 * (1 + std::abs(b))) << t;
  }
}

TEST(Strip, ZetaTwo) {
  EXPECT_NEAR(engine().zeta_strip(2.0).real(), kPi * kPi / 6, 1e-12);
  EXPECT_NEAR(engine().zeta_strip(2.0).imag(), 0.0, 1e-15);
}

TEST(Strip, OracleInsideStrip) {
  const Complex z = engine().zeta_strip(Complex(0.75, 20.0));
  EXPECT_NEAR(z.real(), 0.58468142429604315999, 1e-9);
  EXPECT_NEAR(z.imag(), -0.84328552909225871174, 1e-9);
}

TEST(Strip, SchwarzReflection) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> sig(0.05, 2.9), tt(-300.0, 300.0);
  for (int i = 0; i < 20; ++i) {
    const Complex s(sig(rng), tt(rng));
    const Complex a = engine().zeta_strip(std::conj(s));
    const Complex b = std::conj(engine().zeta_strip(s));
    EXPECT_LT(std::abs(a - b), 1e-10 * (1 + std::abs(b)));
  }
  const Complex up = engine().zeta_strip(Complex(0.5, 40.0));
  const Complex down = engine().zeta_strip(Complex(0.5, -40.0));
  EXPECT_LT(std::abs(down - std::conj(up)), 1e-12);
}

TEST(Strip, PoleAndRange) {
  EXPECT_THROW(engine().zeta_strip(1.0), PoleError);
  EXPECT_THROW(engine().zeta_strip(Complex(0.0, 5.0)), RangeError);
  EXPECT_THROW(engine().zeta_strip(Complex(3.5, 5.0)), RangeError);
  EXPECT_THROW(engine().zeta_strip(Complex(0.5, 2e5)), RangeError);
  EXPECT_THROW(engine().zeta_derivative(1.0), PoleError);
}

TEST(Derivative, MatchesFiniteDifference) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> sig(0.3, 2.5), tt(5.0, 400.0);
  const double h = 1e-6;
  for (int i = 0; i < 20; ++i) {
    const Complex s(sig(rng), tt(rng));
    const Complex fd = (engine().zeta_strip(s + h) - engine().zeta_strip(s - h)) / (2 * h);
    const Complex d = engine().zeta_derivative(s);
    EXPECT_LT(std::abs(d - fd), 1e-5 * std::abs(d)) << s;
  }
}

TEST(Derivative, Oracles) {
  EXPECT_NEAR(engine().zeta_derivative(2.0).real(), -0.93754825431584375370, 1e-8);
  const Complex d = engine().zeta_derivative(Complex(0.7, 25.0));
  EXPECT_NEAR(d.real(), 0.99322933589735661356, 1e-8);
  EXPECT_NEAR(d.imag(), 0.30162721319197290016, 1e-8);
}

TEST(Derivative, Reflection) {
  const Complex s(0.8, 33.3);
  EXPECT_LT(std::abs(engine().zeta_derivative(std::conj(s)) -
                     std::conj(engine().zeta_derivative(s))),
            1e-10);
}

TEST(ErrorFlags, MoreBernoulliTermsNeverIncreaseEstimate) {
  const Complex inputs[] = {{0.5, 20.0}, {0.7, 150.0}, {0.9, 800.0}, {2.0, 0.0}, {0.6, 3000.0}};
  for (const Complex& s : inputs) {
    double prev = INFINITY;
    for (int m = 4; m <= 16; ++m) {
      EngineConfig c;
      c.euler_maclaurin_terms = m;
      const double e = ZetaEngine(c).zeta_strip_estimate(s).error_estimate;
      EXPECT_LE(e, prev) << s << " M=" << m;
      prev = e;
    }
  }
}

TEST(ErrorFlags, WarningRaisedForUnreachableTarget) {
  EngineConfig c;
  c.target_rel_error = 1e-30;
  EXPECT_TRUE(ZetaEngine(c).hardy_z_estimate(1000.0).warning);
  EXPECT_TRUE(ZetaEngine(c).zeta_strip_estimate(Complex(0.7, 30.0)).warning);
  EXPECT_FALSE(engine().hardy_z_estimate(1000.0).warning);
  EXPECT_FALSE(engine().zeta_strip_estimate(Complex(0.7, 30.0)).warning);
}

TEST(Config, InvalidCorrectionOrder) {
  EngineConfig c;
  c.riemann_siegel_correction_order = 5;
  EXPECT_THROW(ZetaEngine{c}, ConfigError);
}
