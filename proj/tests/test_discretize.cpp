#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "maglap/discretize.hpp"
#include "maglap/eigensolve.hpp"
#include "oracles.hpp"

using namespace maglap;

TEST(Discretize, PotentialExamples) {
  const auto f = FieldProfile::constant(2.0);
  EXPECT_NEAR(magnetic_mode(1, f).potential(0.5), 2.25, 1e-15);
  EXPECT_NEAR(l_operator(f).potential(0.5), 2.25, 1e-15);
  EXPECT_NEAR(ltilde_operator(f).potential(0.5), 0.25, 1e-15);
  EXPECT_NEAR(build_operator(OperatorKind::AuxOuterMode, 2, f).potential(0.5),
              (4.0 + 0.75 * 0.75) / 0.25, 1e-14);
  EXPECT_NEAR(build_operator(OperatorKind::AuxInnerMode, -3, f).potential(0.5),
              (9.0 + 0.25 * 0.25) / 0.25, 1e-14);
}

TEST(Discretize, BuildRejectsInfiniteFlux) {
  EXPECT_THROW(magnetic_mode(0, FieldProfile::boundary_blowup(1.0, 1.2)), InfiniteFluxError);
}

TEST(Discretize, StencilEntriesSmallGrid) {
  // N = 16 is the minimum; the N = 4 arithmetic is checked through the
  // same formula at j = 1 with h = 1/4 scaled: diag_1 = r_{3/2} / (r_1 h^2).
  const auto t = discretize(magnetic_mode(0, FieldProfile::constant(0.0)), 16);
  const double h = 1.0 / 16;
  EXPECT_NEAR(t.diag()[0], h / (0.5 * h * h * h), 1e-9);
  EXPECT_NEAR(t.offdiag()[0], -h / (h * h * std::sqrt(0.5 * h * 1.5 * h)), 1e-9);
  // Dirichlet face closure doubles the wall term.
  const double rn = 15.5 * h;
  EXPECT_NEAR(t.diag()[15], (15.0 * h + 2.0 * 16.0 * h) / (rn * h * h), 1e-9);
  for (double e : t.offdiag())
    EXPECT_LT(e, 0.0);
  EXPECT_EQ(t.size(), 16u);
  EXPECT_DOUBLE_EQ(t.step(), h);
  EXPECT_NEAR(t.grid()[0], 0.5 * h, 1e-18);
  EXPECT_NEAR(t.weight()[3], std::sqrt(3.5 * h), 1e-15);
}

TEST(Discretize, FourPointStencilArithmetic) {
  // Values quoted for N = 4, r0 = 1: reproduced from the stencil formula.
  const double h = 0.25, r1 = 0.125, r2 = 0.375;
  EXPECT_DOUBLE_EQ((0.0 + 0.25) / (r1 * h * h), 32.0);
  EXPECT_NEAR(-0.25 / (h * h * std::sqrt(r1 * r2)), -18.4752, 1e-4);
}

TEST(Discretize, GridTooSmall) {
  EXPECT_THROW(discretize(magnetic_mode(0, FieldProfile::constant(1.0)), 8), DomainError);
}

TEST(Discretize, NonFinitePotentialReportsIndex) {
  const auto f = FieldProfile::tabulated({0.0, 1.0}, {1e300, 1e300});
  try {
    discretize(ltilde_operator(f), 32);
    FAIL() << "expected DiscretizationError";
  } catch (const DiscretizationError &e) {
    EXPECT_GE(e.index(), 1u);
  }
}

TEST(DiscretizeProperty, SimilarToRawStencil) {
  const std::size_t n = 16;
  for (int m : {0, 1, -2}) {
    const double b0 = 1.5;
    const auto spec = magnetic_mode(m, FieldProfile::constant(b0));
    const auto sym = discretize(spec, n);

    // Raw finite-volume stencil, assembled independently.
    const double h = 1.0 / n;
    oracle::Tridiag raw;
    for (std::size_t j = 1; j <= n; ++j) {
      const double r = (j - 0.5) * h, lo = (j - 1) * h, hi = j * h;
      const double phi = 0.5 * b0 * r * r;
      const double v = (m / r - phi / r) * (m / r - phi / r);
      double d = (lo + hi) / (r * h * h) + v;
      if (j == n)
        d += hi / (r * h * h);
      raw.diag.push_back(d);
      if (j > 1)
        raw.sub.push_back(-lo / (r * h * h));
      if (j < n)
        raw.super.push_back(-hi / (r * h * h));
    }
    const auto expect = oracle::char_poly_roots(raw);
    const auto got = eigenvalues_below(sym, sym.gershgorin_upper() + 1.0, 1e-13);
    ASSERT_EQ(expect.size(), n) << "m=" << m;
    ASSERT_EQ(got.size(), n);
    for (std::size_t i = 0; i < n; ++i)
      EXPECT_NEAR(got[i], expect[i], 1e-10 * std::max(1.0, std::abs(expect[i])))
          << "m=" << m << " i=" << i;
  }
}

TEST(DiscretizeProperty, SecondOrderConvergence) {
  const double exact = std::pow(oracle::bessel_zero_reference(0, 1), 2);
  const auto spec = magnetic_mode(0, FieldProfile::constant(0.0));
  double prev = 0.0;
  for (std::size_t n : {256u, 512u, 1024u, 2048u}) {
    const double err = std::abs(ground_state(discretize(spec, n)) - exact);
    if (prev > 0.0) {
      EXPECT_GT(prev / err, 3.2) << "N=" << n;
      EXPECT_LT(prev / err, 4.8) << "N=" << n;
    }
    prev = err;
  }
}

TEST(DiscretizeProperty, GroundStateMonotoneInModeAboveFlux) {
  const auto f = FieldProfile::constant(2.0); // F = 1
  double prev = ground_state(discretize(magnetic_mode(1, f), 512));
  for (int m = 2; m <= 6; ++m) {
    const double g = ground_state(discretize(magnetic_mode(m, f), 512));
    EXPECT_GE(g, prev) << "m=" << m;
    prev = g;
  }
}

TEST(DiscretizeProperty, GaugeConsistencyAtIntegerFlux) {
  const auto f = FieldProfile::constant(2.0); // F = 1 = m
  const auto h1 = magnetic_mode(1, f);
  const auto l0 = l_operator(f);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(1e-6, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double r = u(rng);
    EXPECT_EQ(h1.potential(r), l0.potential(r)) << r;
  }
}

TEST(Discretize, MatrixDump) {
  std::ostringstream out;
  write_matrix_csv(discretize(magnetic_mode(0, FieldProfile::constant(0.0)), 16), out);
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("j,r,diag,offdiag\n", 0), 0u);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 17);
}
