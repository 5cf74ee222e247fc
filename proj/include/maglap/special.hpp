#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "maglap/error.hpp"

namespace maglap {

/// Gamma function for x > 0 (Lanczos approximation, g = 7, nine terms).
inline double gamma_fn(double x) {
  if (!(x > 0.0))
    throw DomainError("gamma_fn is only defined here for x > 0");
  if (x < 0.5)
    return gamma_fn(x + 1.0) / x;
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double g = 7.0;
  const double z = x - 1.0;
  double series = c[0];
  for (int i = 1; i < 9; ++i)
    series += c[static_cast<std::size_t>(i)] / (z + i);
  const double t = z + g + 0.5;
  // t^{z+1/2} e^{-t} split to delay overflow
  const double p = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * p * (p * std::exp(-t)) * series;
}

} // namespace maglap
