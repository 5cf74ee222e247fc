#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "maglap/error.hpp"
#include "maglap/field.hpp"
#include "maglap/special.hpp"
#include "maglap/spectral.hpp"

namespace maglap {

/// Semiclassical (Weyl) constant L^cl_{sigma,d} = Gamma(sigma+1) / ((4 pi)^{d/2} Gamma(sigma+1+d/2)).
inline double semiclassical_constant(double sigma, int d) {
  if (!(sigma >= 0.0))
    throw DomainError("sigma must be >= 0");
  if (d != 1 && d != 2)
    throw DomainError("dimension must be 1 or 2");
  const double half_d = 0.5 * d;
  return gamma_fn(sigma + 1.0) /
         (std::pow(4.0 * std::numbers::pi, half_d) * gamma_fn(sigma + 1.0 + half_d));
}

/// L^cl_{sigma,2} |disk| Lambda^{sigma+1}.
inline double berezin_rhs(double sigma, double lambda, double r0) {
  if (!(lambda >= 0.0))
    throw DomainError("Lambda must be >= 0");
  return semiclassical_constant(sigma, 2) * std::numbers::pi * r0 * r0 *
         std::pow(lambda, sigma + 1.0);
}

/// Berezin-type bound with the prefactor 2 (sigma/(sigma+1))^sigma, 0 <= sigma < 1.
inline double laptev_rhs(double sigma, double lambda, double r0) {
  if (!(sigma >= 0.0 && sigma < 1.0))
    throw DomainError("laptev_rhs needs 0 <= sigma < 1; use berezin_rhs");
  const double prefactor = 2.0 * std::pow(sigma / (sigma + 1.0), sigma);
  return prefactor * berezin_rhs(sigma, lambda, r0);
}

/// Integer part of the flux as used by the middle-mode term.
inline double flux_integer_part(double flux) {
  return classify_flux(flux) == FluxClass::Integer ? std::round(flux) : std::floor(flux);
}

/// Bound on the modes 1 <= m <= [F]:
/// 2 L^cl_{sigma,1} r0^{2 sigma+1} / (2 sigma+1) * [F] * Lambda^{sigma+1/2}.
inline double middle_term(double sigma, double lambda, double r0, double flux) {
  if (!(sigma >= 0.0) || !(lambda >= 0.0))
    throw DomainError("middle_term needs sigma >= 0 and Lambda >= 0");
  if (!(flux >= 0.0) || !std::isfinite(flux))
    throw DomainError("middle_term needs finite flux >= 0");
  const double coeff = 2.0 * semiclassical_constant(sigma, 1) *
                       std::pow(r0, 2.0 * sigma + 1.0) / (2.0 * sigma + 1.0);
  return coeff * flux_integer_part(flux) * std::pow(lambda, sigma + 0.5);
}

enum class Branch { NonIntegerFlux, IntegerFlux, Both };

inline const char *to_string(Branch b) {
  switch (b) {
  case Branch::NonIntegerFlux:
    return "non-integer";
  case Branch::IntegerFlux:
    return "integer";
  case Branch::Both:
    return "both";
  }
  return "?";
}

/// Itemized right-hand side of the disk moment inequality.
struct BoundBreakdown {
  double lambda = 0.0;
  double sigma = 0.0;
  double flux = 0.0;
  FluxClass integrality = FluxClass::NonInteger;
  Branch branch = Branch::NonIntegerFlux;

  TraceValue outer;  ///< tr(Lambda - (-Delta + Psi^2/r^2))_+^sigma
  TraceValue inner;  ///< tr(Lambda - (-Delta + Phi^2/r^2))_+^sigma
  TraceValue l;      ///< tr(Lambda - l(B))_+^sigma
  TraceValue ltilde; ///< tr(Lambda - l~(B))_+^sigma
  double middle = 0.0;

  double rhs_noninteger = 0.0; ///< l-term added
  double rhs_integer = 0.0;    ///< l-term subtracted
  double rhs_total = 0.0;      ///< the display used for the verdict
  int l_sign = 1;              ///< sign of the l-term inside rhs_total

  double berezin = 0.0;

  double outer_half() const { return 0.5 * outer.value; }
  double inner_half() const { return 0.5 * inner.value; }
  double l_half() const { return 0.5 * l_sign * l.value; }
  double ltilde_half() const { return 0.5 * ltilde.value; }

  /// Spread of the RHS terms between the N and 2N grids, as they enter rhs_total.
  double spread() const {
    return 0.5 * (outer.spread() + inner.spread() + l.spread() + ltilde.spread());
  }
};

/// Spectra that feed one evaluation of both sides of the inequality.
struct TheoremSpectra {
  double lambda_max = 0.0;
  std::size_t grid_n = 0;
  DiskSpectrum magnetic;
  DiskSpectrum outer;
  DiskSpectrum inner;
};

inline void require_theorem_sigma(double sigma) {
  if (!(sigma >= 1.5))
    throw DomainError("the disk moment inequality needs sigma >= 3/2");
}

/// Spectra below lambda_max; any Lambda <= lambda_max can be evaluated from them.
inline TheoremSpectra theorem_spectra(const FieldProfile &field, double lambda_max,
                                      const SpectralOptions &opt = {}, bool with_magnetic = true) {
  TheoremSpectra s;
  s.lambda_max = lambda_max;
  s.grid_n = opt.grid_n;
  if (with_magnetic)
    s.magnetic = magnetic_spectrum(field, lambda_max, opt);
  s.outer = auxiliary_spectrum(field, AuxSide::Outer, lambda_max, opt);
  s.inner = auxiliary_spectrum(field, AuxSide::Inner, lambda_max, opt);
  return s;
}

/// Assembles the right-hand side at (sigma, Lambda) from precomputed spectra.
inline BoundBreakdown theorem_rhs(const FieldProfile &field, double sigma, double lambda,
                                  const TheoremSpectra &spectra) {
  require_theorem_sigma(sigma);
  if (!(lambda >= 0.0) || lambda > spectra.lambda_max)
    throw DomainError("Lambda outside the range covered by the spectra");
  const TotalFlux tf = field.total_flux();
  BoundBreakdown b;
  b.lambda = lambda;
  b.sigma = sigma;
  b.flux = tf.value;
  b.integrality = tf.integrality;
  b.outer = trace(spectra.outer, lambda, sigma);
  b.inner = trace(spectra.inner, lambda, sigma);
  b.l = mode_trace(spectra.outer, 0, lambda, sigma);
  b.ltilde = mode_trace(spectra.inner, 0, lambda, sigma);
  b.middle = middle_term(sigma, lambda, field.r0(), tf.value);
  const double common = 0.5 * b.outer.value + 0.5 * b.inner.value + b.middle +
                        0.5 * b.ltilde.value;
  b.rhs_noninteger = common + 0.5 * b.l.value;
  b.rhs_integer = common - 0.5 * b.l.value;

  const bool zero_flux = tf.value < kIntegerFluxTol;
  if (zero_flux || tf.integrality == FluxClass::NearBoundaryAmbiguous)
    b.branch = Branch::Both;
  else if (tf.integrality == FluxClass::Integer)
    b.branch = Branch::IntegerFlux;
  else
    b.branch = Branch::NonIntegerFlux;

  switch (b.branch) {
  case Branch::NonIntegerFlux:
    b.l_sign = 1;
    break;
  case Branch::IntegerFlux:
    b.l_sign = -1;
    break;
  case Branch::Both:
    // F = 0: the non-integer display; near-integer F: the smaller display.
    b.l_sign = zero_flux ? 1 : -1;
    break;
  }
  b.rhs_total = b.l_sign > 0 ? b.rhs_noninteger : b.rhs_integer;
  b.berezin = berezin_rhs(sigma, lambda, field.r0());
  return b;
}

inline BoundBreakdown theorem_rhs(const FieldProfile &field, double sigma, double lambda,
                                  const SpectralOptions &opt = {}) {
  require_theorem_sigma(sigma);
  return theorem_rhs(field, sigma, lambda, theorem_spectra(field, lambda, opt, false));
}

} // namespace maglap
