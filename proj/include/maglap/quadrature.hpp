#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace maglap {

/// Adaptive integration did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK tables).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel &o) const { return error < o.error; }
};

template <class F> Panel gauss_kronrod_15(F &f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1)
      gauss += kGaussWeights[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod quadrature of f over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |I|). Nodes are interior, so
/// integrable endpoint singularities are allowed. Throws QuadratureError when
/// max_intervals is exhausted, which is how divergent integrals show up.
template <class F>
QuadratureResult integrate(F &&f, double a, double b, double rel_tol = 1e-12,
                           double abs_tol = 1e-300, int max_intervals = 2000) {
  QuadratureResult out;
  if (a == b)
    return out;
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gauss_kronrod_15(f, a, b));
  double total = panels.top().value;
  double error = panels.top().error;
  int count = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (count >= max_intervals)
      throw QuadratureError("adaptive quadrature did not converge");
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw QuadratureError("adaptive quadrature panel underflow");
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
    if (!std::isfinite(total))
      throw QuadratureError("adaptive quadrature produced a non-finite value");
  }
  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  std::vector<detail::Panel> rest;
  while (!panels.empty()) {
    rest.push_back(panels.top());
    panels.pop();
  }
  for (auto it = rest.rbegin(); it != rest.rend(); ++it) {
    total += it->value;
    error += it->error;
  }
  out.value = total;
  out.error = error;
  out.intervals = count;
  return out;
}

} // namespace maglap
