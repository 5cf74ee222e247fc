#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "maglap/discretize.hpp"
#include "maglap/eigensolve.hpp"
#include "oracles.hpp"

using namespace maglap;

namespace {

SymTridiagonal two_by_two() { return SymTridiagonal({2.0, 2.0}, {-1.0}); }

const SymTridiagonal &zero_field_mode(int m) {
  static const SymTridiagonal t0 = discretize(magnetic_mode(0, FieldProfile::constant(0.0)), 4096);
  static const SymTridiagonal t1 = discretize(magnetic_mode(1, FieldProfile::constant(0.0)), 4096);
  return m == 0 ? t0 : t1;
}

double j2(int m, int k) { return std::pow(oracle::bessel_zero_reference(m, k), 2); }

} // namespace

TEST(CountBelow, Examples) {
  EXPECT_EQ(count_below(two_by_two(), 2.0), 1u);
  EXPECT_EQ(count_below(two_by_two(), 4.0), 2u);
  EXPECT_EQ(count_below(two_by_two(), 0.5), 0u);
  EXPECT_EQ(count_below(zero_field_mode(0), 30.0), 1u);
}

TEST(CountBelow, StrictAtExactEigenvalue) {
  EXPECT_EQ(count_below(two_by_two(), 1.0), 0u);
  EXPECT_EQ(count_below(two_by_two(), 3.0), 1u);
}

TEST(CountBelow, NonFiniteShift) {
  EXPECT_THROW(count_below(two_by_two(), NAN), DomainError);
}

TEST(EigenvaluesBelow, Examples) {
  const auto ev = eigenvalues_below(two_by_two(), 4.0, 1e-12);
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_NEAR(ev[0], 1.0, 1e-12);
  EXPECT_NEAR(ev[1], 3.0, 1e-12);

  const auto one = eigenvalues_below(SymTridiagonal({5.0}, {}), 10.0);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0], 5.0, 1e-9);

  const auto m1 = eigenvalues_below(zero_field_mode(1), 30.0);
  ASSERT_EQ(m1.size(), 1u);
  EXPECT_NEAR(m1[0], j2(1, 1), 1e-5 * j2(1, 1));
  EXPECT_THROW(eigenvalues_below(two_by_two(), 4.0, 0.0), DomainError);
}

TEST(GroundState, Examples) {
  EXPECT_NEAR(ground_state(two_by_two()), 1.0, 1e-14);
  EXPECT_NEAR(ground_state(SymTridiagonal({3.0, 3.0}, {0.0})), 3.0, 1e-14);
  EXPECT_NEAR(ground_state(zero_field_mode(0)), j2(0, 1), 1e-5 * j2(0, 1));
}

TEST(EigensolveProperty, CountIsMonotoneAndComplete) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 11;
    std::vector<double> d(n), e(n - 1);
    for (auto &x : d)
      x = u(rng);
    for (auto &x : e)
      x = u(rng);
    const SymTridiagonal t(d, e);
    std::size_t prev = 0;
    for (double x = t.gershgorin_lower() - 1.0; x < t.gershgorin_upper() + 1.0; x += 0.01) {
      const std::size_t c = count_below(t, x);
      EXPECT_GE(c, prev);
      prev = c;
    }
    EXPECT_EQ(count_below(t, t.gershgorin_upper() + 1.0), n);
    EXPECT_EQ(count_below(t, t.gershgorin_lower() - 1.0), 0u);
  }
}

TEST(EigensolveProperty, ReturnedValuesAreBracketed) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const double tol = 1e-9;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial;
    std::vector<double> d(n), e(n - 1);
    for (auto &x : d)
      x = u(rng);
    for (auto &x : e)
      x = u(rng);
    const SymTridiagonal t(d, e);
    const double x = u(rng);
    const auto ev = eigenvalues_below(t, x, tol);
    EXPECT_EQ(ev.size(), count_below(t, x));
    for (double v : ev)
      EXPECT_GT(count_below(t, v + tol), count_below(t, v - tol));
    EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
  }
}

TEST(EigensolveProperty, AgreesWithCharacteristicPolynomial) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  std::uniform_real_distribution<double> off(0.2, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 12;
    oracle::Tridiag raw;
    std::vector<double> d(n), e(n - 1);
    for (auto &x : d)
      x = u(rng);
    for (auto &x : e)
      x = (rng() % 2 ? 1.0 : -1.0) * off(rng); // nonzero couplings keep the spectrum simple
    raw.diag = d;
    raw.sub = e;
    raw.super = e;
    const auto expect = oracle::char_poly_roots(raw);
    const SymTridiagonal t(d, e);
    const auto got = eigenvalues_below(t, t.gershgorin_upper() + 1.0, 1e-13);
    ASSERT_EQ(got.size(), expect.size()) << "trial " << trial;
    for (std::size_t i = 0; i < n; ++i)
      EXPECT_NEAR(got[i], expect[i], 1e-9) << "trial " << trial;
  }
}

TEST(Eigensolve, RepeatedEigenvalues) {
  // Block-diagonal: eigenvalue 2 twice.
  const SymTridiagonal t({2.0, 2.0, 5.0}, {0.0, 0.0});
  const auto ev = eigenvalues_below(t, 10.0, 1e-12);
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_NEAR(ev[0], 2.0, 1e-12);
  EXPECT_NEAR(ev[1], 2.0, 1e-12);
  EXPECT_NEAR(ev[2], 5.0, 1e-12);
}

TEST(Tridiagonal, ShapeChecks) {
  EXPECT_THROW(SymTridiagonal({}, {}), DomainError);
  EXPECT_THROW(SymTridiagonal({1.0, 2.0}, {}), DomainError);
  const SymTridiagonal t({2.0, 2.0}, {-1.0});
  EXPECT_DOUBLE_EQ(t.gershgorin_lower(), 1.0);
  EXPECT_DOUBLE_EQ(t.gershgorin_upper(), 3.0);
}
