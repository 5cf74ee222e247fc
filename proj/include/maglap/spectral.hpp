#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "maglap/discretize.hpp"
#include "maglap/eigensolve.hpp"
#include "maglap/error.hpp"
#include "maglap/field.hpp"
#include "maglap/parallel.hpp"

namespace maglap {

struct SpectralOptions {
  std::size_t grid_n = kDefaultGrid;
  /// Report (4 lambda(2N) - lambda(N)) / 3 instead of lambda(N).
  bool richardson = true;
  unsigned threads = 1;
  /// Extra modes added on each side of the certified window.
  int window_padding = 0;
  /// Relative bisection width, scaled by max(1, cutoff).
  double eigen_tol = 1e-10;
};

/// Eigenvalues below Lambda of one radial mode.
struct ModeSpectrum {
  int mode = 0;
  std::vector<double> eigenvalues; ///< reported values (extrapolated when enabled)
  std::vector<double> coarse;      ///< raw values on the N grid
  std::vector<double> fine;        ///< raw values on the 2N grid
  std::size_t grid_n = 0;
  bool richardson = false;
};

struct ModeWindow {
  int lo = 0;
  int hi = 0;
};

enum class WindowKind { Magnetic, Auxiliary };

/// Modes that can carry an eigenvalue <= Lambda.
///
/// Magnetic: lambda_1(h_m) >= (m - F)^2 / r0^2 for m >= F and >= m^2 / r0^2
/// for m <= 0; every 0 < m < F is kept. Auxiliary: lambda_1(l_n) >= n^2 / r0^2.
/// One guard mode is added on each side.
inline ModeWindow mode_window(const FieldProfile &field, double lambda, WindowKind kind) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw DomainError("energy threshold must be finite and >= 0");
  const double reach = field.r0() * std::sqrt(lambda);
  if (kind == WindowKind::Auxiliary) {
    const int n = static_cast<int>(std::floor(reach)) + 1;
    return {-n, n};
  }
  const double flux = field.total_flux().value;
  return {static_cast<int>(std::ceil(-reach)) - 1,
          static_cast<int>(std::floor(flux + reach)) + 1};
}

/// Merged spectrum of a radial direct sum.
struct DiskSpectrum {
  OperatorKind kind = OperatorKind::MagneticMode;
  double lambda = 0.0;
  ModeWindow window;
  /// Magnetic: every mode in the window. Auxiliary: n = 0..window.hi only,
  /// with n and -n sharing a spectrum.
  std::vector<ModeSpectrum> modes;
  bool symmetric = false;
  std::size_t grid_n = 0;
  bool richardson = false;
  std::string certificate;

  enum class Source { Reported, Coarse, Fine };

  std::vector<double> merged(Source src = Source::Reported) const {
    std::vector<double> out;
    for (const auto &m : modes) {
      const auto &vals = pick(m, src);
      const int copies = (symmetric && m.mode != 0) ? 2 : 1;
      for (int c = 0; c < copies; ++c)
        out.insert(out.end(), vals.begin(), vals.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const ModeSpectrum *find(int mode) const {
    for (const auto &m : modes)
      if (m.mode == mode)
        return &m;
    return nullptr;
  }

  static const std::vector<double> &pick(const ModeSpectrum &m, Source src) {
    switch (src) {
    case Source::Coarse:
      return m.coarse;
    case Source::Fine:
      return m.fine;
    default:
      return m.eigenvalues;
    }
  }
};

/// sum_k (Lambda - lambda_k)_+^sigma, accumulated in ascending order.
inline double riesz_mean(std::span<const double> eigenvalues, double lambda, double sigma) {
  if (!(sigma >= 0.0))
    throw DomainError("Riesz exponent sigma must be >= 0");
  std::vector<double> sorted(eigenvalues.begin(), eigenvalues.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) {
    if (!(v < lambda))
      break;
    sum += std::pow(lambda - v, sigma);
  }
  return sum;
}

/// A trace evaluated from reported, N-grid and 2N-grid eigenvalues.
struct TraceValue {
  double value = 0.0;
  double coarse = 0.0;
  double fine = 0.0;
  double spread() const { return std::abs(coarse - fine); }
};

namespace detail {

inline double cutoff_for(double lambda) { return lambda + 1e-3 * std::max(1.0, lambda); }

inline std::vector<double> below(const std::vector<double> &v, double lambda) {
  std::vector<double> out;
  for (double x : v)
    if (x < lambda)
      out.push_back(x);
  return out;
}

struct ModeGrids {
  GridFlux coarse, fine;
};

inline ModeGrids make_grids(const FieldProfile &field, std::size_t n) {
  return {make_grid_flux(field, n), make_grid_flux(field, 2 * n)};
}

inline ModeSpectrum solve_mode(const RadialOperatorSpec &spec, const ModeGrids &grids,
                               double lambda, const SpectralOptions &opt) {
  const double cutoff = cutoff_for(lambda);
  const double tol = opt.eigen_tol * std::max(1.0, std::abs(cutoff));
  ModeSpectrum out;
  out.mode = spec.index;
  out.grid_n = grids.coarse.r.size();
  out.richardson = opt.richardson;
  const auto coarse = eigenvalues_below(discretize(spec, grids.coarse), cutoff, tol);
  const auto fine = eigenvalues_below(discretize(spec, grids.fine), cutoff, tol);
  std::vector<double> reported;
  if (opt.richardson) {
    const std::size_t k = std::min(coarse.size(), fine.size());
    for (std::size_t i = 0; i < k; ++i)
      reported.push_back((4.0 * fine[i] - coarse[i]) / 3.0);
  } else {
    reported = coarse;
  }
  out.eigenvalues = below(reported, lambda);
  out.coarse = below(coarse, lambda);
  out.fine = below(fine, lambda);
  return out;
}

inline bool mode_is_empty(const RadialOperatorSpec &spec, const ModeGrids &grids,
                          double lambda) {
  return count_below(discretize(spec, grids.coarse), cutoff_for(lambda)) == 0;
}

inline constexpr int kSafetyModes = 5;

// Widens [lo, hi] until the kSafetyModes modes beyond each open edge have no
// eigenvalue below the cutoff. Returns the number of extensions.
template <class MakeSpec>
int safety_recheck(ModeWindow &w, bool check_low, MakeSpec make_spec, const ModeGrids &grids,
                   double lambda) {
  int extensions = 0;
  for (bool changed = true; changed;) {
    changed = false;
    for (int d = 1; d <= kSafetyModes; ++d) {
      if (!mode_is_empty(make_spec(w.hi + d), grids, lambda)) {
        w.hi += d;
        changed = true;
        ++extensions;
        break;
      }
    }
    if (!check_low)
      continue;
    for (int d = 1; d <= kSafetyModes; ++d) {
      if (!mode_is_empty(make_spec(w.lo - d), grids, lambda)) {
        w.lo -= d;
        changed = true;
        ++extensions;
        break;
      }
    }
  }
  return extensions;
}

} // namespace detail

/// Spectrum of the magnetic Dirichlet Laplacian below Lambda, assembled from
/// the angular modes h_m(B) in the certified window.
inline DiskSpectrum magnetic_spectrum(const FieldProfile &field, double lambda,
                                      const SpectralOptions &opt = {}) {
  ModeWindow w = mode_window(field, lambda, WindowKind::Magnetic);
  const auto grids = detail::make_grids(field, opt.grid_n);
  auto make = [&](int m) { return magnetic_mode(m, field); };
  const int ext = detail::safety_recheck(w, true, make, grids, lambda);
  w.lo -= opt.window_padding;
  w.hi += opt.window_padding;

  DiskSpectrum out;
  out.kind = OperatorKind::MagneticMode;
  out.lambda = lambda;
  out.window = w;
  out.grid_n = opt.grid_n;
  out.richardson = opt.richardson;
  out.certificate = "lambda_1(h_m) >= (m-F)^2/r0^2 (m>=F), m^2/r0^2 (m<=0); +1 guard, " +
                    std::to_string(detail::kSafetyModes) + "-mode recheck (" +
                    std::to_string(ext) + " extension(s))";
  out.modes.resize(static_cast<std::size_t>(w.hi - w.lo + 1));
  parallel_for(out.modes.size(), resolve_threads(opt.threads), [&](std::size_t i) {
    const int m = w.lo + static_cast<int>(i);
    out.modes[i] = detail::solve_mode(make(m), grids, lambda, opt);
  });
  return out;
}

enum class AuxSide { Outer, Inner };

inline OperatorKind aux_kind(AuxSide side) {
  return side == AuxSide::Outer ? OperatorKind::AuxOuterMode : OperatorKind::AuxInnerMode;
}

/// Spectrum below Lambda of -Delta_D + Psi(r)^2/r^2 (outer) or
/// -Delta_D + Phi(r)^2/r^2 (inner), from the modes n >= 0.
inline DiskSpectrum auxiliary_spectrum(const FieldProfile &field, AuxSide side, double lambda,
                                       const SpectralOptions &opt = {}) {
  ModeWindow w = mode_window(field, lambda, WindowKind::Auxiliary);
  const auto grids = detail::make_grids(field, opt.grid_n);
  const OperatorKind kind = aux_kind(side);
  auto make = [&](int n) { return build_operator(kind, n, field); };
  const int ext = detail::safety_recheck(w, false, make, grids, lambda);
  w.hi += opt.window_padding;
  w.lo = -w.hi;

  DiskSpectrum out;
  out.kind = kind;
  out.lambda = lambda;
  out.window = w;
  out.symmetric = true;
  out.grid_n = opt.grid_n;
  out.richardson = opt.richardson;
  out.certificate = "lambda_1(l_n) >= n^2/r0^2; +1 guard, " +
                    std::to_string(detail::kSafetyModes) + "-mode recheck (" +
                    std::to_string(ext) + " extension(s))";
  out.modes.resize(static_cast<std::size_t>(w.hi + 1));
  parallel_for(out.modes.size(), resolve_threads(opt.threads), [&](std::size_t i) {
    out.modes[i] = detail::solve_mode(make(static_cast<int>(i)), grids, lambda, opt);
  });
  return out;
}

/// Riesz mean of the full direct sum (both signs of n for auxiliary spectra).
inline TraceValue trace(const DiskSpectrum &s, double lambda, double sigma) {
  using Src = DiskSpectrum::Source;
  if (!s.symmetric) {
    return {riesz_mean(s.merged(Src::Reported), lambda, sigma),
            riesz_mean(s.merged(Src::Coarse), lambda, sigma),
            riesz_mean(s.merged(Src::Fine), lambda, sigma)};
  }
  // tr = 2 * sum_{n>=1} + (n = 0)
  auto eval = [&](Src src) {
    std::vector<double> positive;
    const std::vector<double> *zero = nullptr;
    for (const auto &m : s.modes) {
      const auto &v = DiskSpectrum::pick(m, src);
      if (m.mode == 0)
        zero = &v;
      else
        positive.insert(positive.end(), v.begin(), v.end());
    }
    const double z = zero ? riesz_mean(*zero, lambda, sigma) : 0.0;
    return 2.0 * riesz_mean(positive, lambda, sigma) + z;
  };
  return {eval(Src::Reported), eval(Src::Coarse), eval(Src::Fine)};
}

/// Riesz mean of a single mode of a spectrum (e.g. n = 0 for l(B), l~(B)).
inline TraceValue mode_trace(const DiskSpectrum &s, int mode, double lambda, double sigma) {
  if (!(sigma >= 0.0))
    throw DomainError("Riesz exponent sigma must be >= 0");
  const ModeSpectrum *m = s.find(mode);
  if (!m)
    return {};
  return {riesz_mean(m->eigenvalues, lambda, sigma), riesz_mean(m->coarse, lambda, sigma),
          riesz_mean(m->fine, lambda, sigma)};
}

inline double riesz_mean(const DiskSpectrum &s, double lambda, double sigma) {
  return trace(s, lambda, sigma).value;
}

inline TraceValue schrodinger_trace(const FieldProfile &field, AuxSide side, double lambda,
                                    double sigma, const SpectralOptions &opt = {}) {
  if (!(sigma >= 0.0))
    throw DomainError("Riesz exponent sigma must be >= 0");
  return trace(auxiliary_spectrum(field, side, lambda, opt), lambda, sigma);
}

/// Spectrum below Lambda of one radial operator.
inline ModeSpectrum operator_spectrum(const RadialOperatorSpec &spec, double lambda,
                                      const SpectralOptions &opt = {}) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw DomainError("energy threshold must be finite and >= 0");
  return detail::solve_mode(spec, detail::make_grids(spec.field, opt.grid_n), lambda, opt);
}

enum class Operator1d { L, LTilde };

/// tr(Lambda - l(B))_+^sigma or tr(Lambda - l~(B))_+^sigma.
inline TraceValue operator_trace_1d(const FieldProfile &field, Operator1d which, double lambda,
                                    double sigma, const SpectralOptions &opt = {}) {
  if (!(sigma >= 0.0))
    throw DomainError("Riesz exponent sigma must be >= 0");
  const auto spec = which == Operator1d::L ? l_operator(field) : ltilde_operator(field);
  const auto m = operator_spectrum(spec, lambda, opt);
  return {riesz_mean(m.eigenvalues, lambda, sigma), riesz_mean(m.coarse, lambda, sigma),
          riesz_mean(m.fine, lambda, sigma)};
}

/// Richardson-extrapolated ground state of one radial operator.
struct GroundState {
  double value = 0.0;
  double coarse = 0.0;
  double fine = 0.0;
  double spread() const { return std::abs(coarse - fine); }
};

inline GroundState ground_state(const RadialOperatorSpec &spec, const SpectralOptions &opt = {}) {
  const auto grids = detail::make_grids(spec.field, opt.grid_n);
  GroundState g;
  g.coarse = ground_state(discretize(spec, grids.coarse));
  g.fine = ground_state(discretize(spec, grids.fine));
  g.value = opt.richardson ? (4.0 * g.fine - g.coarse) / 3.0 : g.coarse;
  return g;
}

/// Ground state of a radial direct sum: the mode-0 ground state bounds it from
/// above, then every mode the window admits at that level is scanned.
inline GroundState direct_sum_ground_state(const FieldProfile &field, OperatorKind kind,
                                           const SpectralOptions &opt = {}) {
  const auto grids = detail::make_grids(field, opt.grid_n);
  auto solve = [&](int m) {
    const auto spec = build_operator(kind, m, field);
    GroundState g;
    g.coarse = ground_state(discretize(spec, grids.coarse));
    g.fine = ground_state(discretize(spec, grids.fine));
    g.value = opt.richardson ? (4.0 * g.fine - g.coarse) / 3.0 : g.coarse;
    return g;
  };
  GroundState best = solve(0);
  const double level = std::max({best.value, best.coarse, best.fine});
  const bool magnetic = kind == OperatorKind::MagneticMode;
  const ModeWindow w = mode_window(field, level,
                                   magnetic ? WindowKind::Magnetic : WindowKind::Auxiliary);
  const int lo = magnetic ? w.lo : 1;
  std::vector<int> modes;
  for (int m = lo; m <= w.hi; ++m)
    if (m != 0)
      modes.push_back(m);
  std::vector<GroundState> found(modes.size());
  parallel_for(modes.size(), resolve_threads(opt.threads),
               [&](std::size_t i) { found[i] = solve(modes[i]); });
  for (const auto &g : found)
    if (g.value < best.value)
      best = g;
  return best;
}

} // namespace maglap
