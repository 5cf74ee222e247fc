#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "maglap/error.hpp"

namespace maglap {

/// J_m(x) for integer m >= 0 and x >= 0 by Miller's backward recurrence,
/// normalised with J_0 + 2 sum_k J_{2k} = 1.
inline double bessel_j(int m, double x) {
  if (m < 0 || !(x >= 0.0))
    throw DomainError("bessel_j needs m >= 0 and x >= 0");
  if (x == 0.0)
    return m == 0 ? 1.0 : 0.0;
  const int top = std::max(m, static_cast<int>(std::ceil(x)));
  int start = top + 40 + static_cast<int>(std::sqrt(160.0 * top));
  start += start % 2;
  double next = 0.0; // J_{k+1}
  double cur = 1e-300; // J_k
  double norm = 0.0;
  double wanted = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = 2.0 * k / x * cur - next; // J_{k-1}
    next = cur;
    cur = prev;
    if (k - 1 == m)
      wanted = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0)
      norm += 2.0 * cur;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      next *= 1e-250;
      norm *= 1e-250;
      wanted *= 1e-250;
    }
  }
  norm += cur; // J_0
  return wanted / norm;
}

inline constexpr int kBesselOracleMaxOrder = 20;
inline constexpr int kBesselOracleMaxIndex = 50;

/// k-th positive zero of J_m (m <= 20, k <= 50): scan for sign changes from
/// x = m, where J_m is still positive, then bisect to machine precision.
inline double bessel_zero(int m, int k) {
  if (m < 0 || m > kBesselOracleMaxOrder || k < 1 || k > kBesselOracleMaxIndex)
    throw DomainError("bessel_zero outside the oracle range m <= 20, 1 <= k <= 50");
  constexpr double step = 0.05;
  double a = std::max(0.5, static_cast<double>(m));
  double fa = bessel_j(m, a);
  int found = 0;
  for (;;) {
    const double b = a + step;
    const double fb = bessel_j(m, b);
    if ((fa > 0.0) != (fb > 0.0) || fb == 0.0) {
      if (++found == k) {
        double lo = a, hi = b, flo = fa;
        while (hi - lo > 1e-15 * hi) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi)
            break;
          const double fm = bessel_j(m, mid);
          if ((fm > 0.0) == (flo > 0.0) && fm != 0.0) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
    }
    a = b;
    fa = fb;
  }
}

/// Dirichlet eigenvalues (j_{m,k}/r0)^2 < Lambda of the disk without field,
/// with multiplicity 2 for m >= 1; ascending.
inline std::vector<double> zero_field_oracle(double r0, double lambda) {
  if (!(r0 > 0.0) || !(lambda >= 0.0))
    throw DomainError("zero_field_oracle needs r0 > 0 and Lambda >= 0");
  const double reach = r0 * std::sqrt(lambda);
  std::vector<double> out;
  for (int m = 0;; ++m) {
    if (m > kBesselOracleMaxOrder) {
      if (reach > m) // j_{m,1} > m, so higher orders may still contribute
        throw DomainError("zero_field_oracle: Lambda exceeds the Bessel oracle range");
      break;
    }
    if (bessel_zero(m, 1) >= reach)
      break;
    for (int k = 1;; ++k) {
      if (k > kBesselOracleMaxIndex)
        throw DomainError("zero_field_oracle: Lambda exceeds the Bessel oracle range");
      const double z = bessel_zero(m, k);
      if (z >= reach)
        break;
      const double ev = (z / r0) * (z / r0);
      out.push_back(ev);
      if (m > 0)
        out.push_back(ev);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace maglap
