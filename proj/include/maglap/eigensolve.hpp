#pragma once

#include <cfloat>
#include <cmath>
#include <vector>

#include "maglap/error.hpp"
#include "maglap/tridiagonal.hpp"

namespace maglap {

/// Number of eigenvalues of t strictly below x (Sturm count).
///
/// Counts negative pivots of the LDL^T factorization of t - xI. Pivots are
/// carried in long double; an exactly vanishing pivot is replaced by a
/// positive ulp-scale value, so an eigenvalue equal to x is not counted.
inline std::size_t count_below(const SymTridiagonal &t, double x) {
  if (!std::isfinite(x))
    throw DomainError("count_below needs a finite shift");
  using real = long double;
  const auto &d = t.diag();
  const auto &e = t.offdiag();
  const real tiny = static_cast<real>(LDBL_EPSILON) *
                    (static_cast<real>(t.scale()) + std::abs(static_cast<real>(x)));
  const real shift = x;
  std::size_t count = 0;
  real q = static_cast<real>(d[0]) - shift;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(q) < tiny)
      q = tiny;
    if (q < 0)
      ++count;
    if (i + 1 == d.size())
      break;
    const real off = e[i];
    q = (static_cast<real>(d[i + 1]) - shift) - off * off / q;
  }
  return count;
}

/// Default absolute bisection width for eigenvalues below x.
inline double default_eigen_tol(double x) { return 1e-10 * std::max(1.0, std::abs(x)); }

namespace detail {

inline void bisect_cluster(const SymTridiagonal &t, double lo, double hi, std::size_t n_lo,
                           std::size_t n_hi, double tol, std::vector<double> &out) {
  // Invariant: exactly n_hi - n_lo eigenvalues lie in [lo, hi).
  while (n_hi > n_lo) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol || mid <= lo || mid >= hi) {
      for (std::size_t k = n_lo; k < n_hi; ++k)
        out.push_back(mid);
      return;
    }
    const std::size_t n_mid = count_below(t, mid);
    if (n_mid > n_lo && n_mid < n_hi) {
      bisect_cluster(t, lo, mid, n_lo, n_mid, tol, out);
      lo = mid;
      n_lo = n_mid;
    } else if (n_mid == n_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
}

} // namespace detail

/// All eigenvalues strictly below x, ascending, each bisected to width tol.
inline std::vector<double> eigenvalues_below(const SymTridiagonal &t, double x, double tol) {
  if (!(tol > 0.0))
    throw DomainError("bisection tolerance must be positive");
  std::vector<double> out;
  const std::size_t total = count_below(t, x);
  if (total == 0)
    return out;
  out.reserve(total);
  double lo = t.gershgorin_lower();
  lo -= std::max(1.0, std::abs(lo)) * 1e-12;
  detail::bisect_cluster(t, lo, x, 0, total, tol, out);
  return out;
}

inline std::vector<double> eigenvalues_below(const SymTridiagonal &t, double x) {
  return eigenvalues_below(t, x, default_eigen_tol(x));
}

/// Smallest eigenvalue, bisected until the bracket stops shrinking.
inline double ground_state(const SymTridiagonal &t) {
  double lo = t.gershgorin_lower();
  double hi = t.gershgorin_upper();
  lo -= std::max(1.0, std::abs(lo)) * 1e-12;
  hi += std::max(1.0, std::abs(hi)) * 1e-12;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    if (count_below(t, mid) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace maglap
