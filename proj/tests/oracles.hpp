#pragma once

// Test-only reference computations. Nothing here calls the eigensolver or the
// Bessel routines under test.

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

namespace oracle {

/// Tridiagonal matrix with sub-diagonal a, diagonal b, super-diagonal c
/// (not necessarily symmetric).
struct Tridiag {
  std::vector<double> sub, diag, super;
};

/// det(T - xI) by the three-term recurrence, rescaled to stay finite.
/// Returns only the sign-relevant value.
inline long double char_poly(const Tridiag &t, long double x) {
  long double prev = 1.0L;
  long double cur = static_cast<long double>(t.diag[0]) - x;
  for (std::size_t k = 1; k < t.diag.size(); ++k) {
    const long double next = (static_cast<long double>(t.diag[k]) - x) * cur -
                             static_cast<long double>(t.sub[k - 1]) *
                                 static_cast<long double>(t.super[k - 1]) * prev;
    prev = cur;
    cur = next;
    const long double mag = std::max(std::abs(prev), std::abs(cur));
    if (mag > 1e100L) {
      prev /= mag;
      cur /= mag;
    }
  }
  return cur;
}

/// Roots of the characteristic polynomial by fine scanning + bisection.
/// Adequate for small matrices with real, simple spectra.
inline std::vector<double> char_poly_roots(const Tridiag &t, int scan_steps = 200000) {
  double lo = INFINITY, hi = -INFINITY;
  const std::size_t n = t.diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0)
      r += std::sqrt(std::abs(t.sub[i - 1] * t.super[i - 1]));
    if (i + 1 < n)
      r += std::sqrt(std::abs(t.sub[i] * t.super[i]));
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  lo -= 1.0;
  hi += 1.0;
  std::vector<double> roots;
  const double h = (hi - lo) / scan_steps;
  long double fa = char_poly(t, lo);
  for (int i = 1; i <= scan_steps; ++i) {
    const double b = lo + i * h;
    const long double fb = char_poly(t, b);
    if (fb == 0.0L) {
      roots.push_back(b);
    } else if ((fa < 0) != (fb < 0) && fa != 0.0L) {
      long double l = b - h, r = b, fl = fa;
      for (int it = 0; it < 200 && r - l > 1e-16L * std::max(1.0L, std::abs(r)); ++it) {
        const long double m = 0.5L * (l + r);
        const long double fm = char_poly(t, m);
        if ((fm < 0) == (fl < 0)) {
          l = m;
          fl = fm;
        } else {
          r = m;
        }
      }
      roots.push_back(static_cast<double>(0.5L * (l + r)));
    }
    fa = fb;
  }
  return roots;
}

/// J_m(x) by the ascending power series in long double; reliable for x <= ~20.
inline long double bessel_series(int m, long double x) {
  long double term = 1.0L;
  for (int i = 1; i <= m; ++i)
    term *= x / (2.0L * i);
  long double sum = term;
  const long double q = -x * x / 4.0L;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * (k + m));
    sum += term;
    if (std::abs(term) < 1e-30L * std::max(1.0L, std::abs(sum)) && k > x)
      break;
  }
  return sum;
}

inline double bessel_zero_reference(int m, int k) {
  return boost::math::cyl_bessel_j_zero(static_cast<double>(m), k);
}

/// Dirichlet disk eigenvalues below lambda from reference Bessel zeros.
inline std::vector<double> disk_eigenvalues(double r0, double lambda) {
  std::vector<double> out;
  for (int m = 0;; ++m) {
    if (bessel_zero_reference(m, 1) / r0 >= std::sqrt(lambda))
      break;
    for (int k = 1;; ++k) {
      const double z = bessel_zero_reference(m, k) / r0;
      if (z * z >= lambda)
        break;
      out.push_back(z * z);
      if (m > 0)
        out.push_back(z * z);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double riesz(const std::vector<double> &eigs, double lambda, double sigma) {
  double s = 0.0;
  for (double e : eigs)
    if (e < lambda)
      s += std::pow(lambda - e, sigma);
  return s;
}

} // namespace oracle
