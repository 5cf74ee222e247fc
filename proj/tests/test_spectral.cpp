#include <cmath>

#include <gtest/gtest.h>

#include "maglap/spectral.hpp"
#include "oracles.hpp"

using namespace maglap;

namespace {

const FieldProfile kZero = FieldProfile::constant(0.0);

double zero_field_riesz_30() { return oracle::riesz(oracle::disk_eigenvalues(1.0, 30.0), 30.0, 1.5); }

} // namespace

TEST(ModeWindow, Examples) {
  auto w = mode_window(kZero, 30.0, WindowKind::Magnetic);
  EXPECT_EQ(w.lo, -6);
  EXPECT_EQ(w.hi, 6);
  w = mode_window(FieldProfile::constant(1.0), 100.0, WindowKind::Magnetic);
  EXPECT_EQ(w.lo, -11);
  EXPECT_EQ(w.hi, 11);
  w = mode_window(kZero, 0.0, WindowKind::Magnetic);
  EXPECT_EQ(w.lo, -1);
  EXPECT_EQ(w.hi, 1);
  w = mode_window(FieldProfile::constant(6.0), 0.0, WindowKind::Magnetic); // F = 3
  EXPECT_EQ(w.hi, 4);
  w = mode_window(kZero, 30.0, WindowKind::Auxiliary);
  EXPECT_EQ(w.lo, -6);
  EXPECT_EQ(w.hi, 6);
  EXPECT_THROW(mode_window(kZero, -1.0, WindowKind::Magnetic), DomainError);
}

TEST(MagneticSpectrum, ZeroFieldMatchesBessel) {
  const auto s = magnetic_spectrum(kZero, 30.0);
  const auto got = s.merged();
  const auto expect = oracle::disk_eigenvalues(1.0, 30.0);
  ASSERT_EQ(got.size(), 5u);
  ASSERT_EQ(expect.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i)
    EXPECT_NEAR(got[i], expect[i], 1e-6 * expect[i]);
  EXPECT_NEAR(got[0], 5.7832, 1e-4);
  EXPECT_NEAR(got[1], 14.6820, 1e-4);
  EXPECT_NEAR(got[4], 26.3746, 1e-4);
}

TEST(MagneticSpectrum, ConstantFieldLowerBounds) {
  const auto s = magnetic_spectrum(FieldProfile::constant(2.0), 30.0);
  const auto ev = s.merged();
  ASSERT_FALSE(ev.empty());
  EXPECT_GE(ev.front(), std::pow(oracle::bessel_zero_reference(0, 1), 2));
  EXPECT_GE(ev.front(), 2.0);
}

TEST(MagneticSpectrum, EmptyAtZeroThreshold) {
  for (const auto &f : {kZero, FieldProfile::constant(2.0), FieldProfile::boundary_blowup(1.0, 0.5)}) {
    const auto s = magnetic_spectrum(f, 0.0);
    EXPECT_TRUE(s.merged().empty());
    EXPECT_EQ(riesz_mean(s, 0.0, 1.5), 0.0);
  }
}

TEST(RieszMean, Examples) {
  const std::vector<double> ev = {1.0, 3.0};
  EXPECT_DOUBLE_EQ(riesz_mean(ev, 2.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(riesz_mean(std::vector<double>{}, 7.0, 1.5), 0.0);
  EXPECT_DOUBLE_EQ(riesz_mean(ev, 4.0, 0.0), 2.0); // counting function
  EXPECT_DOUBLE_EQ(riesz_mean(std::vector<double>{3.0, 1.0}, 3.0, 1.0), 2.0); // strict at Lambda
  EXPECT_THROW(riesz_mean(ev, 2.0, -0.5), DomainError);
}

TEST(RieszMean, ZeroFieldOracle) {
  const double oracle_value = zero_field_riesz_30();
  EXPECT_NEAR(oracle_value, 252.9, 0.05);
  const double got = riesz_mean(magnetic_spectrum(kZero, 30.0), 30.0, 1.5);
  EXPECT_NEAR(got, oracle_value, 1e-5 * oracle_value);
}

TEST(SchrodingerTrace, ZeroFieldCoincidesWithDirichlet) {
  const double expect = zero_field_riesz_30();
  const auto outer = schrodinger_trace(kZero, AuxSide::Outer, 30.0, 1.5);
  const auto inner = schrodinger_trace(kZero, AuxSide::Inner, 30.0, 1.5);
  EXPECT_NEAR(outer.value, expect, 1e-5 * expect);
  EXPECT_NEAR(inner.value, expect, 1e-5 * expect);
}

TEST(SchrodingerTrace, InnerModeZeroIsLTilde) {
  const auto f = FieldProfile::constant(1.3);
  const auto s = auxiliary_spectrum(f, AuxSide::Inner, 40.0);
  const auto mode0 = mode_trace(s, 0, 40.0, 1.5);
  const auto lt = operator_trace_1d(f, Operator1d::LTilde, 40.0, 1.5);
  EXPECT_EQ(mode0.value, lt.value);
  EXPECT_EQ(mode0.coarse, lt.coarse);
}

TEST(SchrodingerTrace, OuterNonNegativeAndModeZeroOrdering) {
  const auto t = schrodinger_trace(FieldProfile::constant(1.0), AuxSide::Outer, 30.0, 1.5);
  EXPECT_GE(t.value, 0.0);
  // The n = 0 outer potential grows pointwise with B0, so counts can only drop.
  std::size_t prev = SIZE_MAX;
  for (double b0 : {0.0, 1.0, 2.0, 4.0, 8.0}) {
    const auto mat = discretize(l_operator(FieldProfile::constant(b0)), 1024);
    const std::size_t c = count_below(mat, 60.0);
    EXPECT_LE(c, prev) << "B0=" << b0;
    prev = c;
  }
}

TEST(OperatorTrace1d, Examples) {
  const auto l = operator_trace_1d(kZero, Operator1d::L, 30.0, 1.5);
  const double expect = std::pow(30.0 - std::pow(oracle::bessel_zero_reference(0, 1), 2), 1.5);
  EXPECT_NEAR(l.value, expect, 1e-5 * expect);
  EXPECT_NEAR(l.value, 119.18, 0.01);
  const auto lt = operator_trace_1d(kZero, Operator1d::LTilde, 30.0, 1.5);
  EXPECT_EQ(l.value, lt.value);
  EXPECT_EQ(operator_trace_1d(FieldProfile::constant(3.0), Operator1d::L, 0.0, 1.5).value, 0.0);
  EXPECT_THROW(operator_trace_1d(kZero, Operator1d::L, 30.0, -1.0), DomainError);
}

TEST(SpectralProperty, WindowPaddingDoesNotChangeTraces) {
  for (const auto &f : {FieldProfile::constant(1.0), FieldProfile::boundary_blowup(1.0, 0.5)}) {
    SpectralOptions padded;
    padded.window_padding = 5;
    const double base = riesz_mean(magnetic_spectrum(f, 50.0), 50.0, 1.5);
    const double wide = riesz_mean(magnetic_spectrum(f, 50.0, padded), 50.0, 1.5);
    EXPECT_LE(std::abs(base - wide), 1e-12 * base);
    const double ob = schrodinger_trace(f, AuxSide::Outer, 50.0, 2.0).value;
    const double ow = schrodinger_trace(f, AuxSide::Outer, 50.0, 2.0, padded).value;
    EXPECT_LE(std::abs(ob - ow), 1e-12 * ob);
  }
}

TEST(SpectralProperty, PlusMinusModeAsymmetry) {
  const auto s = magnetic_spectrum(FieldProfile::constant(2.0), 60.0);
  const auto *plus = s.find(1);
  const auto *minus = s.find(-1);
  ASSERT_TRUE(plus && minus);
  ASSERT_FALSE(plus->eigenvalues.empty());
  ASSERT_FALSE(minus->eigenvalues.empty());
  EXPECT_GT(std::abs(plus->eigenvalues[0] - minus->eigenvalues[0]), 1e-3);

  const auto z = magnetic_spectrum(kZero, 60.0);
  for (int m = 1; m <= 3; ++m) {
    const auto &a = z.find(m)->eigenvalues;
    const auto &b = z.find(-m)->eigenvalues;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      EXPECT_NEAR(a[i], b[i], 1e-9 * a[i]);
  }
}

TEST(SpectralProperty, DecompositionIdentity) {
  const auto f = FieldProfile::boundary_blowup(1.0, 0.5);
  const double lambda = 60.0, sigma = 1.5;
  const auto s = auxiliary_spectrum(f, AuxSide::Outer, lambda);
  std::vector<double> positive;
  for (const auto &m : s.modes)
    if (m.mode > 0)
      positive.insert(positive.end(), m.eigenvalues.begin(), m.eigenvalues.end());
  const double l = operator_trace_1d(f, Operator1d::L, lambda, sigma).value;
  const double outer = schrodinger_trace(f, AuxSide::Outer, lambda, sigma).value;
  EXPECT_EQ(outer, 2.0 * riesz_mean(positive, lambda, sigma) + l);
}

TEST(SpectralProperty, RieszMonotoneAndContinuousAcrossEigenvalue) {
  const auto f = FieldProfile::constant(1.0);
  const auto s = magnetic_spectrum(f, 40.0);
  const auto ev = s.merged();
  ASSERT_GE(ev.size(), 2u);
  const double target = ev[1];
  double prev = -1.0;
  for (int i = -20; i <= 20; ++i) {
    const double lambda = target + i * 1e-3;
    const double v = riesz_mean(s, lambda, 1.5);
    EXPECT_GE(v, prev);
    prev = v;
  }
  const double below = riesz_mean(s, target - 1e-9, 1.5);
  const double above = riesz_mean(s, target + 1e-9, 1.5);
  EXPECT_LT(above - below, 1e-6);
}

TEST(SpectralProperty, DeterministicAcrossThreads) {
  const auto f = FieldProfile::boundary_blowup(1.0, 0.5);
  SpectralOptions one, many;
  many.threads = 4;
  const auto a = magnetic_spectrum(f, 80.0, one).merged();
  const auto b = magnetic_spectrum(f, 80.0, many).merged();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(a[i], b[i]);
}

TEST(SpectralProperty, WithoutRichardsonReportsCoarseGrid) {
  SpectralOptions raw;
  raw.richardson = false;
  const auto s = magnetic_spectrum(kZero, 30.0, raw);
  for (const auto &m : s.modes)
    EXPECT_EQ(m.eigenvalues, m.coarse);
}

TEST(GroundStates, DirectSumMatchesBruteForceMinimum) {
  for (const auto &f : {FieldProfile::constant(20.0), FieldProfile::power_law(12.0, 2.0)}) {
    const auto g = direct_sum_ground_state(f, OperatorKind::MagneticMode);
    double brute = INFINITY;
    for (int m = -15; m <= 25; ++m)
      brute = std::min(brute, ground_state(magnetic_mode(m, f)).value);
    EXPECT_EQ(g.value, brute);
  }
  // Form bound inf B for the constant field.
  EXPECT_GE(direct_sum_ground_state(FieldProfile::constant(20.0), OperatorKind::MagneticMode).value,
            20.0 - 1e-8);
}
