#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "maglap/error.hpp"
#include "maglap/field.hpp"
#include "maglap/tridiagonal.hpp"

namespace maglap {

/// Family of one-dimensional radial operators -d^2/dr^2 - (1/r) d/dr + V(r).
enum class OperatorKind {
  MagneticMode, ///< h_m: V = (m - Phi)^2 / r^2
  AuxOuterMode, ///< l_n: V = (n^2 + Psi^2) / r^2; n = 0 is l(B)
  AuxInnerMode, ///< V = (n^2 + Phi^2) / r^2; n = 0 is l~(B)
};

inline const char *to_string(OperatorKind k) {
  switch (k) {
  case OperatorKind::MagneticMode:
    return "magnetic";
  case OperatorKind::AuxOuterMode:
    return "outer";
  case OperatorKind::AuxInnerMode:
    return "inner";
  }
  return "?";
}

/// Radial operator on (0, r0) with Dirichlet condition at r0.
struct RadialOperatorSpec {
  OperatorKind kind = OperatorKind::MagneticMode;
  int index = 0; ///< angular mode m or n
  FieldProfile field;

  double r0() const noexcept { return field.r0(); }

  /// Potential from precomputed inner/outer fluxes at r.
  double potential(double r, double phi, double psi) const {
    const double k = static_cast<double>(index);
    double numerator = 0.0;
    switch (kind) {
    case OperatorKind::MagneticMode:
      numerator = (k - phi) * (k - phi);
      break;
    case OperatorKind::AuxOuterMode:
      numerator = k * k + psi * psi;
      break;
    case OperatorKind::AuxInnerMode:
      numerator = k * k + phi * phi;
      break;
    }
    return numerator / (r * r);
  }

  double potential(double r) const {
    return potential(r, field.flux_in(r), field.flux_out(r));
  }
};

inline RadialOperatorSpec build_operator(OperatorKind kind, int index,
                                         const FieldProfile &field) {
  if (!field.finite_flux())
    throw InfiniteFluxError("cannot build a radial operator for infinite flux");
  return {kind, index, field};
}

inline RadialOperatorSpec magnetic_mode(int m, const FieldProfile &f) {
  return build_operator(OperatorKind::MagneticMode, m, f);
}
/// l(B)
inline RadialOperatorSpec l_operator(const FieldProfile &f) {
  return build_operator(OperatorKind::AuxOuterMode, 0, f);
}
/// l~(B)
inline RadialOperatorSpec ltilde_operator(const FieldProfile &f) {
  return build_operator(OperatorKind::AuxInnerMode, 0, f);
}

inline constexpr std::size_t kMinGrid = 16;
inline constexpr std::size_t kDefaultGrid = 4096;

/// Offset grid r_j = (j - 1/2) h, h = r0 / N, with Phi and Psi sampled on it.
/// Shared by every mode built on the same (field, N).
struct GridFlux {
  double r0 = 1.0;
  double step = 0.0;
  std::vector<double> r, phi, psi;
};

inline GridFlux make_grid_flux(const FieldProfile &field, std::size_t n) {
  if (n < kMinGrid)
    throw DomainError("grid size must be at least 16");
  GridFlux g;
  g.r0 = field.r0();
  g.step = g.r0 / static_cast<double>(n);
  g.r.resize(n);
  g.phi.resize(n);
  g.psi.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    g.r[j] = (static_cast<double>(j) + 0.5) * g.step;
    g.phi[j] = field.flux_in(g.r[j]);
    g.psi[j] = field.total_flux().value - g.phi[j];
  }
  return g;
}

/// Finite-volume discretization of the divergence form -(1/r)(r u')' + V u,
/// symmetrized by diag(sqrt(r_j)).
///
/// Faces sit at r_{j+1/2} = j h, so r_{1/2} = 0 carries no flux (natural
/// condition at the origin). The Dirichlet wall is the face r_{N+1/2} = r0,
/// closed with the ghost value u_{N+1} = -u_N.
inline SymTridiagonal discretize(const RadialOperatorSpec &spec, const GridFlux &g) {
  const std::size_t n = g.r.size();
  const double h = g.step;
  const double h2 = h * h;
  std::vector<double> diag(n), off(n - 1), weight(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double r = g.r[j];
    const double face_lo = static_cast<double>(j) * h;
    const double face_hi = static_cast<double>(j + 1) * h;
    const double wall = (j + 1 == n) ? 2.0 * face_hi : face_hi;
    const double v = spec.potential(r, g.phi[j], g.psi[j]);
    if (!std::isfinite(v))
      throw DiscretizationError("non-finite potential", j + 1);
    diag[j] = (face_lo + wall) / (r * h2) + v;
    weight[j] = std::sqrt(r);
    if (j + 1 < n)
      off[j] = -face_hi / (h2 * std::sqrt(r * g.r[j + 1]));
  }
  return SymTridiagonal(std::move(diag), std::move(off), g.r, std::move(weight), h);
}

inline SymTridiagonal discretize(const RadialOperatorSpec &spec, std::size_t n) {
  return discretize(spec, make_grid_flux(spec.field, n));
}

} // namespace maglap
