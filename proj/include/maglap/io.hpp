#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "maglap/bounds.hpp"
#include "maglap/format.hpp"
#include "maglap/spectral.hpp"
#include "maglap/verify.hpp"

namespace maglap {

using json = nlohmann::ordered_json;

// Spectrum export ----------------------------------------------------------

inline void write_spectrum_csv(const DiskSpectrum &s, std::ostream &out) {
  out << "mode,index,eigenvalue\n";
  auto rows = [&](int mode, const std::vector<double> &vals) {
    for (std::size_t i = 0; i < vals.size(); ++i)
      out << mode << ',' << (i + 1) << ',' << format_double(vals[i]) << '\n';
  };
  if (!s.symmetric) {
    for (const auto &m : s.modes)
      rows(m.mode, m.eigenvalues);
    return;
  }
  for (auto it = s.modes.rbegin(); it != s.modes.rend(); ++it)
    if (it->mode != 0)
      rows(-it->mode, it->eigenvalues);
  for (const auto &m : s.modes)
    rows(m.mode, m.eigenvalues);
}

inline json to_json(const DiskSpectrum &s) {
  json modes = json::array();
  for (const auto &m : s.modes)
    modes.push_back({{"mode", m.mode}, {"eigenvalues", m.eigenvalues}});
  return {{"operator", to_string(s.kind)},
          {"lambda", s.lambda},
          {"window", {s.window.lo, s.window.hi}},
          {"symmetric", s.symmetric},
          {"grid_n", s.grid_n},
          {"richardson", s.richardson},
          {"certificate", s.certificate},
          {"modes", modes},
          {"eigenvalues", s.merged()}};
}

// Bound reports ------------------------------------------------------------

inline json to_json(const TraceValue &t) {
  return {{"value", t.value}, {"coarse", t.coarse}, {"fine", t.fine}};
}

inline json to_json(const BoundBreakdown &b) {
  return {{"lambda", b.lambda},
          {"sigma", b.sigma},
          {"flux", b.flux},
          {"integrality", to_string(b.integrality)},
          {"branch", to_string(b.branch)},
          {"outer_half", b.outer_half()},
          {"inner_half", b.inner_half()},
          {"middle", b.middle},
          {"l_half", b.l_half()},
          {"ltilde_half", b.ltilde_half()},
          {"outer_trace", to_json(b.outer)},
          {"inner_trace", to_json(b.inner)},
          {"l_trace", to_json(b.l)},
          {"ltilde_trace", to_json(b.ltilde)},
          {"rhs_noninteger", b.rhs_noninteger},
          {"rhs_integer", b.rhs_integer},
          {"rhs_total", b.rhs_total},
          {"berezin_rhs", b.berezin}};
}

inline json to_json(const BoundReport &r) {
  return {{"field", r.field},
          {"sigma", r.sigma},
          {"lambda", r.lambda},
          {"grid_n", r.grid_n},
          {"lhs", to_json(r.lhs)},
          {"lhs_count", r.lhs_count},
          {"breakdown", to_json(r.breakdown)},
          {"margin", r.margin},
          {"error", r.error},
          {"verdict", to_string(r.verdict)}};
}

inline constexpr const char *kReportCsvHeader =
    "sigma,lambda,branch,outer,inner,middle,l,ltilde,rhs,lhs,margin";

/// One CSV row per report; with both_branches, one row per display.
inline void write_report_rows(const BoundReport &r, std::ostream &out, bool both_branches,
                              const std::string &prefix = {}) {
  const auto &b = r.breakdown;
  auto row = [&](const char *branch, int l_sign, double rhs) {
    out << prefix << format_double(r.sigma) << ',' << format_double(r.lambda) << ','
        << branch << ',' << format_double(b.outer_half()) << ','
        << format_double(b.inner_half()) << ',' << format_double(b.middle) << ','
        << format_double(0.5 * l_sign * b.l.value) << ',' << format_double(b.ltilde_half())
        << ',' << format_double(rhs) << ',' << format_double(r.lhs.value) << ','
        << format_double(rhs - r.lhs.value) << '\n';
  };
  if (both_branches) {
    row(to_string(Branch::NonIntegerFlux), 1, b.rhs_noninteger);
    row(to_string(Branch::IntegerFlux), -1, b.rhs_integer);
  } else {
    row(to_string(b.branch), b.l_sign, b.rhs_total);
  }
}

inline json to_json(const ClassicalReport &r) {
  json laptev = std::isnan(r.laptev) ? json(nullptr) : json(r.laptev);
  return {{"field", r.field},
          {"sigma", r.sigma},
          {"lambda", r.lambda},
          {"lhs", r.lhs},
          {"berezin_rhs", r.berezin},
          {"berezin_checked", r.berezin_checked},
          {"berezin_holds", r.berezin_holds},
          {"laptev_rhs", laptev},
          {"lambda1", r.lambda1},
          {"lambda1_zero_field", r.lambda1_zero_field},
          {"inf_b", r.inf_b},
          {"diamagnetic_holds", r.diamagnetic_holds},
          {"form_holds", r.form_holds}};
}

inline constexpr const char *kClassicalCsvHeader =
    "sigma,lambda,lhs,berezin_rhs,laptev_rhs,lambda1,lambda1_zero_field,inf_b,"
    "berezin_holds,diamagnetic_holds,form_holds";

inline void write_classical_row(const ClassicalReport &r, std::ostream &out) {
  out << format_double(r.sigma) << ',' << format_double(r.lambda) << ','
      << format_double(r.lhs) << ',' << format_double(r.berezin) << ','
      << (std::isnan(r.laptev) ? std::string() : format_double(r.laptev)) << ','
      << format_double(r.lambda1) << ',' << format_double(r.lambda1_zero_field) << ','
      << format_double(r.inf_b) << ',' << (r.berezin_checked ? (r.berezin_holds ? 1 : 0) : -1)
      << ',' << (r.diamagnetic_holds ? 1 : 0) << ',' << (r.form_holds ? 1 : 0) << '\n';
}

inline json to_json(const GroundState &g) {
  return {{"value", g.value}, {"coarse", g.coarse}, {"fine", g.fine}};
}

inline json to_json(const ThresholdReport &r) {
  return {{"field", r.field},         {"lambda1", to_json(r.lambda1)},
          {"outer", to_json(r.outer)}, {"inner", to_json(r.inner)},
          {"l", to_json(r.l)},         {"ltilde", to_json(r.ltilde)},
          {"t_star", r.t_star},        {"error", r.error},
          {"margin", r.margin},        {"holds", r.holds}};
}

inline constexpr const char *kThresholdCsvHeader =
    "lambda1,outer,inner,l,ltilde,t_star,error,margin,holds";

inline void write_threshold_row(const ThresholdReport &r, std::ostream &out) {
  out << format_double(r.lambda1.value) << ',' << format_double(r.outer.value) << ','
      << format_double(r.inner.value) << ',' << format_double(r.l.value) << ','
      << format_double(r.ltilde.value) << ',' << format_double(r.t_star) << ','
      << format_double(r.error) << ',' << format_double(r.margin) << ','
      << (r.holds ? 1 : 0) << '\n';
}

} // namespace maglap
