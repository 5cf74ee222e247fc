#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "maglap/bessel.hpp"
#include "maglap/bounds.hpp"
#include "maglap/error.hpp"
#include "maglap/field.hpp"
#include "maglap/spectral.hpp"

namespace maglap {

enum class Verdict { Holds, HoldsWithinError, Violated };

inline const char *to_string(Verdict v) {
  switch (v) {
  case Verdict::Holds:
    return "holds";
  case Verdict::HoldsWithinError:
    return "holds-within-error";
  case Verdict::Violated:
    return "violated";
  }
  return "?";
}

/// One evaluation of the disk moment inequality.
struct BoundReport {
  std::string field;
  double sigma = 0.0;
  double lambda = 0.0;
  TraceValue lhs; ///< tr(Lambda - H)_+^sigma
  std::size_t lhs_count = 0; ///< magnetic eigenvalues below Lambda (max over grids)
  BoundBreakdown breakdown;
  double margin = 0.0;
  double error = 0.0; ///< N vs 2N spread summed over the terms of the margin
  Verdict verdict = Verdict::HoldsWithinError;
  std::size_t grid_n = 0;
};

inline Verdict classify_margin(double margin, double error, bool lhs_empty) {
  // An empty magnetic spectrum below Lambda makes lhs exactly 0, and the RHS
  // is a sum of non-negative terms (1/2 outer - 1/2 l = sum over n >= 1).
  if (lhs_empty)
    return margin >= 0.0 ? Verdict::Holds : Verdict::Violated;
  if (margin > error)
    return Verdict::Holds;
  if (margin < -error)
    return Verdict::Violated;
  return Verdict::HoldsWithinError;
}

inline BoundReport make_report(const FieldProfile &field, double sigma, double lambda,
                               const TheoremSpectra &spectra) {
  BoundReport r;
  r.field = field.describe();
  r.sigma = sigma;
  r.lambda = lambda;
  r.grid_n = spectra.grid_n;
  r.breakdown = theorem_rhs(field, sigma, lambda, spectra);
  r.lhs = trace(spectra.magnetic, lambda, sigma);
  using Src = DiskSpectrum::Source;
  for (Src src : {Src::Reported, Src::Coarse, Src::Fine}) {
    const auto all = spectra.magnetic.merged(src);
    const auto n = static_cast<std::size_t>(
        std::count_if(all.begin(), all.end(), [&](double v) { return v < lambda; }));
    r.lhs_count = std::max(r.lhs_count, n);
  }
  r.margin = r.breakdown.rhs_total - r.lhs.value;
  r.error = r.lhs.spread() + r.breakdown.spread();
  r.verdict = classify_margin(r.margin, r.error, r.lhs_count == 0);
  return r;
}

/// Checks the disk moment inequality at every Lambda of the grid. Reports that
/// come out HoldsWithinError are recomputed once on the doubled grid.
inline std::vector<BoundReport> check_theorem(const FieldProfile &field, double sigma,
                                              const std::vector<double> &lambdas,
                                              const SpectralOptions &opt = {}) {
  require_theorem_sigma(sigma);
  if (!field.finite_flux())
    throw InfiniteFluxError("total flux is infinite");
  std::vector<BoundReport> out;
  if (lambdas.empty())
    return out;
  for (double l : lambdas)
    if (!(l >= 0.0) || !std::isfinite(l))
      throw DomainError("Lambda values must be finite and >= 0");
  const double lambda_max = *std::max_element(lambdas.begin(), lambdas.end());
  const auto spectra = theorem_spectra(field, lambda_max, opt);
  std::vector<double> unresolved;
  for (double l : lambdas) {
    out.push_back(make_report(field, sigma, l, spectra));
    if (out.back().verdict == Verdict::HoldsWithinError)
      unresolved.push_back(l);
  }
  if (unresolved.empty())
    return out;
  SpectralOptions refined = opt;
  refined.grid_n = 2 * opt.grid_n;
  const double refine_max = *std::max_element(unresolved.begin(), unresolved.end());
  const auto finer = theorem_spectra(field, refine_max, refined);
  for (auto &r : out)
    if (r.verdict == Verdict::HoldsWithinError)
      r = make_report(field, sigma, r.lambda, finer);
  return out;
}

/// Tolerance for the first-eigenvalue lower bounds.
inline constexpr double kGroundStateTol = 1e-8;

struct ClassicalReport {
  std::string field;
  double sigma = 0.0;
  double lambda = 0.0;
  double lhs = 0.0;
  double berezin = 0.0;
  bool berezin_checked = false; ///< only asserted for sigma >= 3/2
  bool berezin_holds = true;
  double laptev = std::numeric_limits<double>::quiet_NaN(); ///< reference for sigma < 1
  double lambda1 = 0.0;
  double lambda1_zero_field = 0.0;
  double inf_b = 0.0;
  bool diamagnetic_holds = false; ///< lambda1 >= lambda1(B = 0)
  bool form_holds = false;        ///< lambda1 >= inf B

  bool all_hold() const { return berezin_holds && diamagnetic_holds && form_holds; }
};

/// Magnetic ground state of the field.
inline GroundState magnetic_ground_state(const FieldProfile &field,
                                         const SpectralOptions &opt = {}) {
  return direct_sum_ground_state(field, OperatorKind::MagneticMode, opt);
}

inline ClassicalReport check_classical(const FieldProfile &field, double sigma, double lambda,
                                       const SpectralOptions &opt = {}) {
  const auto v = validate(field);
  ClassicalReport r;
  r.field = field.describe();
  r.sigma = sigma;
  r.lambda = lambda;
  r.lhs = riesz_mean(magnetic_spectrum(field, lambda, opt), lambda, sigma);
  r.berezin = berezin_rhs(sigma, lambda, field.r0());
  r.berezin_checked = sigma >= 1.5;
  r.berezin_holds = !r.berezin_checked || r.lhs <= r.berezin;
  if (sigma < 1.0)
    r.laptev = laptev_rhs(sigma, lambda, field.r0());
  r.lambda1 = magnetic_ground_state(field, opt).value;
  r.lambda1_zero_field =
      magnetic_ground_state(FieldProfile::constant(0.0, field.r0()), opt).value;
  r.inf_b = v.inf_b;
  r.diamagnetic_holds = r.lambda1 >= r.lambda1_zero_field - kGroundStateTol;
  r.form_holds = r.lambda1 >= r.inf_b - kGroundStateTol;
  return r;
}

/// Lower bound on the bottom of the magnetic spectrum for flux F < 1.
struct ThresholdReport {
  std::string field;
  GroundState lambda1;
  GroundState outer;  ///< -Delta + Psi^2/r^2 on the disk
  GroundState inner;  ///< -Delta + Phi^2/r^2 on the disk
  GroundState l;      ///< l(B)
  GroundState ltilde; ///< l~(B)
  double t_star = 0.0;
  double error = 0.0;
  double margin = 0.0; ///< lambda1 - t_star
  bool holds = false;
};

inline ThresholdReport threshold_bound(const FieldProfile &field,
                                       const SpectralOptions &opt = {}) {
  const double flux = field.total_flux().value;
  if (!(flux < 1.0))
    throw PreconditionError("threshold bound needs total flux F < 1");
  ThresholdReport r;
  r.field = field.describe();
  r.lambda1 = magnetic_ground_state(field, opt);
  r.outer = direct_sum_ground_state(field, OperatorKind::AuxOuterMode, opt);
  r.inner = direct_sum_ground_state(field, OperatorKind::AuxInnerMode, opt);
  r.l = ground_state(l_operator(field), opt);
  r.ltilde = ground_state(ltilde_operator(field), opt);
  const GroundState *lowest = &r.outer;
  for (const GroundState *g : {&r.inner, &r.l, &r.ltilde})
    if (g->value < lowest->value)
      lowest = g;
  r.t_star = lowest->value;
  r.error = r.lambda1.spread() + lowest->spread();
  r.margin = r.lambda1.value - r.t_star;
  r.holds = r.margin >= -r.error;
  return r;
}

} // namespace maglap
