#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "maglap/error.hpp"
#include "maglap/format.hpp"
#include "maglap/quadrature.hpp"

namespace maglap {

enum class FieldKind { Constant, PowerLaw, BoundaryBlowup, Tabulated };

enum class FluxClass { Integer, NonInteger, NearBoundaryAmbiguous };

inline const char *to_string(FluxClass c) {
  switch (c) {
  case FluxClass::Integer:
    return "integer";
  case FluxClass::NonInteger:
    return "non-integer";
  case FluxClass::NearBoundaryAmbiguous:
    return "ambiguous";
  }
  return "?";
}

struct TotalFlux {
  double value = 0.0;
  FluxClass integrality = FluxClass::NonInteger;
};

/// |F - round(F)| below this counts as integer flux.
inline constexpr double kIntegerFluxTol = 1e-9;
/// Between kIntegerFluxTol and this the branch is reported as ambiguous.
inline constexpr double kAmbiguousFluxTol = 1e-6;

inline FluxClass classify_flux(double flux) {
  if (flux < kIntegerFluxTol)
    return FluxClass::Integer;
  const double dist = std::abs(flux - std::round(flux));
  if (dist < kIntegerFluxTol)
    return FluxClass::Integer;
  if (dist < kAmbiguousFluxTol)
    return FluxClass::NearBoundaryAmbiguous;
  return FluxClass::NonInteger;
}

struct FieldValidation {
  double inf_b = 0.0;      ///< K = inf B over (0, r0)
  double total_flux = 0.0; ///< F
  bool blows_up = false;   ///< B -> infinity at the boundary
  bool blowup_regime = false; ///< blow-up together with K > 0
};

/// Radially symmetric magnetic field B(|x|) on the disk of radius r0.
///
/// Immutable after construction. The total flux F = \int_0^{r0} s B(s) ds is
/// computed eagerly; a divergent F is stored as +inf and every flux query
/// then throws InfiniteFluxError.
class FieldProfile {
public:
  static FieldProfile constant(double b0, double r0 = 1.0) {
    FieldProfile p(FieldKind::Constant, {b0}, r0);
    p.finish();
    return p;
  }

  /// B(r) = c r^p with p > -1.
  static FieldProfile power_law(double c, double power, double r0 = 1.0) {
    if (!(power > -1.0))
      throw DomainError("power-law exponent must exceed -1");
    FieldProfile p(FieldKind::PowerLaw, {c, power}, r0);
    p.finish();
    return p;
  }

  /// B(r) = c (r0 - r)^{-gamma}; the flux is finite only for gamma < 1.
  static FieldProfile boundary_blowup(double c, double gamma, double r0 = 1.0) {
    if (!(gamma > 0.0))
      throw DomainError("blow-up exponent must be positive");
    FieldProfile p(FieldKind::BoundaryBlowup, {c, gamma}, r0);
    p.finish();
    return p;
  }

  /// Piecewise-linear interpolation of samples (r_i, B_i), held constant
  /// outside [r_first, r_last].
  static FieldProfile tabulated(std::vector<double> r, std::vector<double> b,
                                double r0 = 1.0) {
    if (r.size() != b.size() || r.size() < 2)
      throw InvalidFieldError("table needs at least two (r, B) rows");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!std::isfinite(r[i]) || !std::isfinite(b[i]))
        throw InvalidFieldError("table contains a non-finite value");
      if (i > 0 && !(r[i] > r[i - 1]))
        throw InvalidFieldError("table radii must be strictly increasing");
    }
    if (r.front() < 0.0 || r.back() > r0)
      throw InvalidFieldError("table radii must lie in [0, r0]");
    FieldProfile p(FieldKind::Tabulated, {}, r0);
    p.table_r_ = std::move(r);
    p.table_b_ = std::move(b);
    p.finish();
    return p;
  }

  FieldKind kind() const noexcept { return kind_; }
  double r0() const noexcept { return r0_; }
  const std::vector<double> &params() const noexcept { return params_; }
  const std::vector<double> &table_r() const noexcept { return table_r_; }
  const std::vector<double> &table_b() const noexcept { return table_b_; }

  bool blows_up() const noexcept {
    return kind_ == FieldKind::BoundaryBlowup && params_[0] > 0.0;
  }

  bool finite_flux() const noexcept { return std::isfinite(total_); }

  /// B(r) for 0 < r < r0.
  double field(double r) const {
    if (!(r > 0.0 && r < r0_))
      throw DomainError("field evaluated outside (0, r0)");
    switch (kind_) {
    case FieldKind::Constant:
      return params_[0];
    case FieldKind::PowerLaw:
      return params_[0] * std::pow(r, params_[1]);
    case FieldKind::BoundaryBlowup:
      return field_at_depth(r0_ - r);
    case FieldKind::Tabulated:
      return table_value(r);
    }
    return 0.0;
  }

  /// B as a function of the distance d = r0 - r to the boundary, d in (0, r0).
  double field_at_depth(double d) const {
    if (kind_ == FieldKind::BoundaryBlowup)
      return params_[0] * std::pow(d, -params_[1]);
    return field(r0_ - d);
  }

  /// Phi(r) = \int_0^r s B(s) ds.
  double flux_in(double r) const {
    check_flux_arg(r);
    require_finite_flux();
    if (r == r0_)
      return total_;
    return flux_closed_form(r);
  }

  /// Psi(r) = \int_r^{r0} s B(s) ds = F - Phi(r).
  double flux_out(double r) const {
    check_flux_arg(r);
    require_finite_flux();
    return total_ - flux_in(r);
  }

  TotalFlux total_flux() const {
    require_finite_flux();
    return {total_, classify_flux(total_)};
  }

  /// Phi(r) by adaptive quadrature of s B(s), independent of the closed forms.
  /// For blow-up profiles the part of [0, r] beyond r0/2 is integrated in
  /// t = sqrt(r0 - s), which regularises the (r0 - s)^{-gamma} singularity.
  double flux_in_quadrature(double r, double rel_tol = 1e-13) const {
    check_flux_arg(r);
    auto integrand = [this](double s) { return s * field(s); };
    try {
      if (kind_ == FieldKind::Tabulated) {
        // Split at the kinks of the interpolant.
        double sum = 0.0;
        double a = 0.0;
        for (double node : table_r_) {
          if (node <= a)
            continue;
          const double b = std::min(node, r);
          sum += integrate(integrand, a, b, rel_tol).value;
          a = b;
          if (a >= r)
            break;
        }
        if (a < r)
          sum += integrate(integrand, a, r, rel_tol).value;
        return sum;
      }
      if (kind_ != FieldKind::BoundaryBlowup || r <= 0.5 * r0_)
        return integrate(integrand, 0.0, r, rel_tol).value;
      const double split = 0.5 * r0_;
      const double inner = integrate(integrand, 0.0, split, rel_tol).value;
      auto substituted = [this](double t) {
        const double depth = t * t;
        return 2.0 * t * (r0_ - depth) * field_at_depth(depth);
      };
      const double outer =
          integrate(substituted, std::sqrt(r0_ - r), std::sqrt(r0_ - split),
                    rel_tol, 1e-300, 4000)
              .value;
      return inner + outer;
    } catch (const QuadratureError &e) {
      throw InfiniteFluxError(std::string("flux integral diverges: ") + e.what());
    }
  }

  /// Canonical spec string (`constant:B0`, `power:c,p`, `blowup:c,gamma`, `table:<n points>`).
  std::string describe() const {
    switch (kind_) {
    case FieldKind::Constant:
      return "constant:" + format_double(params_[0]);
    case FieldKind::PowerLaw:
      return "power:" + format_double(params_[0]) + "," + format_double(params_[1]);
    case FieldKind::BoundaryBlowup:
      return "blowup:" + format_double(params_[0]) + "," + format_double(params_[1]);
    case FieldKind::Tabulated:
      return source_.empty() ? "table:" + std::to_string(table_r_.size()) + "pts"
                             : "table:" + source_;
    }
    return "";
  }

  void set_source(std::string s) { source_ = std::move(s); }

private:
  FieldProfile(FieldKind kind, std::vector<double> params, double r0)
      : kind_(kind), params_(std::move(params)), r0_(r0) {
    if (!(r0 > 0.0) || !std::isfinite(r0))
      throw DomainError("disk radius r0 must be positive and finite");
    for (double v : params_)
      if (!std::isfinite(v))
        throw DomainError("field parameters must be finite");
  }

  void finish() {
    if (kind_ == FieldKind::Tabulated) {
      node_flux_.resize(table_r_.size());
      const double r_first = table_r_.front();
      node_flux_[0] = 0.5 * table_b_.front() * r_first * r_first;
      for (std::size_t i = 1; i < table_r_.size(); ++i)
        node_flux_[i] = node_flux_[i - 1] + segment_flux(i - 1, table_r_[i]);
    }
    if (kind_ == FieldKind::BoundaryBlowup && params_[1] >= 1.0 && params_[0] != 0.0) {
      total_ = INFINITY;
      return;
    }
    total_ = flux_closed_form(r0_);
  }

  void check_flux_arg(double r) const {
    if (!(r >= 0.0 && r <= r0_))
      throw DomainError("flux evaluated outside [0, r0]");
  }

  void require_finite_flux() const {
    if (!std::isfinite(total_))
      throw InfiniteFluxError("total flux \\int_0^r0 s B(s) ds is infinite");
  }

  double table_value(double r) const {
    if (r <= table_r_.front())
      return table_b_.front();
    if (r >= table_r_.back())
      return table_b_.back();
    const auto it = std::upper_bound(table_r_.begin(), table_r_.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - table_r_.begin()) - 1;
    const double t = (r - table_r_[i]) / (table_r_[i + 1] - table_r_[i]);
    return table_b_[i] + t * (table_b_[i + 1] - table_b_[i]);
  }

  // \int_{r_i}^{x} s B(s) ds on the linear piece starting at node i.
  double segment_flux(std::size_t i, double x) const {
    const double a = table_r_[i];
    const double ba = table_b_[i];
    const double slope = (table_b_[i + 1] - ba) / (table_r_[i + 1] - a);
    const double sq = 0.5 * (x * x - a * a);
    const double cube = (x * x * x - a * a * a) / 3.0;
    return ba * sq + slope * (cube - a * sq);
  }

  double flux_closed_form(double r) const {
    switch (kind_) {
    case FieldKind::Constant:
      return 0.5 * params_[0] * r * r;
    case FieldKind::PowerLaw: {
      const double e = params_[1] + 2.0;
      return params_[0] * std::pow(r, e) / e;
    }
    case FieldKind::BoundaryBlowup: {
      // u = r0 - s: \int_{r0-r}^{r0} (r0 - u) u^{-gamma} du
      const double c = params_[0];
      const double g = params_[1];
      const double a = r0_ - r;
      const double lead = (std::pow(r0_, 1.0 - g) - std::pow(a, 1.0 - g)) / (1.0 - g);
      const double tail = (std::pow(r0_, 2.0 - g) - std::pow(a, 2.0 - g)) / (2.0 - g);
      return c * (r0_ * lead - tail);
    }
    case FieldKind::Tabulated: {
      const double r_first = table_r_.front();
      if (r <= r_first)
        return 0.5 * table_b_.front() * r * r;
      if (r >= table_r_.back()) {
        const double rl = table_r_.back();
        return node_flux_.back() + 0.5 * table_b_.back() * (r * r - rl * rl);
      }
      const auto it = std::upper_bound(table_r_.begin(), table_r_.end(), r);
      const std::size_t i = static_cast<std::size_t>(it - table_r_.begin()) - 1;
      return node_flux_[i] + segment_flux(i, r);
    }
    }
    return 0.0;
  }

  FieldKind kind_;
  std::vector<double> params_;
  double r0_;
  double total_ = 0.0;
  std::vector<double> table_r_, table_b_, node_flux_;
  std::string source_;
};

inline double eval_B(const FieldProfile &p, double r) { return p.field(r); }
inline double flux_in(const FieldProfile &p, double r) { return p.flux_in(r); }
inline double flux_out(const FieldProfile &p, double r) { return p.flux_out(r); }
inline TotalFlux total_flux(const FieldProfile &p) { return p.total_flux(); }

/// Samples used for the inf B estimate.
inline constexpr std::size_t kValidationSamples = std::size_t{1} << 14;

/// Checks B >= 0 and finite flux, and estimates K = inf B.
inline FieldValidation validate(const FieldProfile &p) {
  const double r0 = p.r0();
  const auto &prm = p.params();
  // Sign analysis of the closed forms.
  bool sign_ok = true;
  switch (p.kind()) {
  case FieldKind::Constant:
  case FieldKind::PowerLaw:
  case FieldKind::BoundaryBlowup:
    sign_ok = prm[0] >= 0.0;
    break;
  case FieldKind::Tabulated:
    sign_ok = *std::min_element(p.table_b().begin(), p.table_b().end()) >= 0.0;
    break;
  }
  double sampled_min = INFINITY;
  for (std::size_t i = 0; i < kValidationSamples; ++i) {
    const double r = (static_cast<double>(i) + 0.5) * r0 / kValidationSamples;
    sampled_min = std::min(sampled_min, p.field(r));
  }
  if (!sign_ok || sampled_min < 0.0)
    throw InvalidFieldError("field takes negative values");
  if (!p.finite_flux())
    throw InfiniteFluxError("total flux is infinite");

  FieldValidation out;
  out.total_flux = p.total_flux().value;
  out.blows_up = p.blows_up();
  // Closed-form infima where monotonicity is known; sampling otherwise.
  switch (p.kind()) {
  case FieldKind::Constant:
    out.inf_b = prm[0];
    break;
  case FieldKind::PowerLaw:
    if (prm[1] > 0.0)
      out.inf_b = 0.0;
    else if (prm[1] == 0.0)
      out.inf_b = prm[0];
    else
      out.inf_b = prm[0] * std::pow(r0, prm[1]);
    break;
  case FieldKind::BoundaryBlowup:
    out.inf_b = prm[0] * std::pow(r0, -prm[1]);
    break;
  case FieldKind::Tabulated:
    out.inf_b = std::min(sampled_min,
                         *std::min_element(p.table_b().begin(), p.table_b().end()));
    break;
  }
  out.blowup_regime = out.blows_up && out.inf_b > 0.0;
  return out;
}

inline std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception &) {
      throw InvalidFieldError("malformed number '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
      ++used;
    if (used != item.size())
      throw InvalidFieldError("malformed number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// Reads a CSV with columns `r,B` (a header row is optional).
inline FieldProfile read_field_table(const std::string &path, double r0) {
  std::ifstream in(path);
  if (!in)
    throw InvalidFieldError("cannot open field table '" + path + "'");
  std::vector<double> rs, bs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line[0] == '#')
      continue;
    if (first) {
      first = false;
      if (line.find_first_of("rRbB") != std::string::npos &&
          line.find_first_of("0123456789") == std::string::npos)
        continue;
    }
    const auto row = parse_number_list(line);
    if (row.size() != 2)
      throw InvalidFieldError("field table rows must have two columns r,B");
    rs.push_back(row[0]);
    bs.push_back(row[1]);
  }
  auto p = FieldProfile::tabulated(std::move(rs), std::move(bs), r0);
  p.set_source(path);
  return p;
}

/// Parses `constant:B0`, `power:c,p`, `blowup:c,gamma` or `table:path.csv`.
inline FieldProfile parse_field_spec(std::string_view spec, double r0) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw InvalidFieldError("field spec '" + std::string(spec) + "' lacks a ':'");
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view body = spec.substr(colon + 1);
  if (kind == "table")
    return read_field_table(std::string(body), r0);
  const auto args = parse_number_list(body);
  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw InvalidFieldError("field spec '" + std::string(spec) + "' expects " +
                              std::to_string(n) + " parameter(s)");
  };
  if (kind == "constant") {
    want(1);
    return FieldProfile::constant(args[0], r0);
  }
  if (kind == "power") {
    want(2);
    return FieldProfile::power_law(args[0], args[1], r0);
  }
  if (kind == "blowup") {
    want(2);
    return FieldProfile::boundary_blowup(args[0], args[1], r0);
  }
  throw InvalidFieldError("unknown field kind '" + std::string(kind) + "'");
}

} // namespace maglap
