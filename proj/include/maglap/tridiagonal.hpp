#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "maglap/error.hpp"
#include "maglap/format.hpp"

namespace maglap {

/// Real symmetric tridiagonal matrix, optionally carrying the radial grid it
/// was discretized on.
class SymTridiagonal {
public:
  SymTridiagonal(std::vector<double> diag, std::vector<double> offdiag)
      : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
    if (diag_.empty())
      throw DomainError("tridiagonal matrix must be non-empty");
    if (offdiag_.size() + 1 != diag_.size())
      throw DomainError("off-diagonal must have size N-1");
    compute_bounds();
  }

  SymTridiagonal(std::vector<double> diag, std::vector<double> offdiag,
                 std::vector<double> grid, std::vector<double> weight, double step)
      : SymTridiagonal(std::move(diag), std::move(offdiag)) {
    grid_ = std::move(grid);
    weight_ = std::move(weight);
    step_ = step;
  }

  std::size_t size() const noexcept { return diag_.size(); }
  const std::vector<double> &diag() const noexcept { return diag_; }
  const std::vector<double> &offdiag() const noexcept { return offdiag_; }
  /// Grid points r_j (empty for matrices built directly).
  const std::vector<double> &grid() const noexcept { return grid_; }
  /// sqrt(r_j): the similarity that symmetrizes the finite-volume stencil.
  const std::vector<double> &weight() const noexcept { return weight_; }
  double step() const noexcept { return step_; }

  double gershgorin_lower() const noexcept { return lower_; }
  double gershgorin_upper() const noexcept { return upper_; }
  /// Largest entry magnitude; sets the zero-pivot guard of the Sturm count.
  double scale() const noexcept { return scale_; }

private:
  void compute_bounds() {
    const std::size_t n = diag_.size();
    lower_ = INFINITY;
    upper_ = -INFINITY;
    scale_ = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double radius = 0.0;
      if (i > 0)
        radius += std::abs(offdiag_[i - 1]);
      if (i + 1 < n)
        radius += std::abs(offdiag_[i]);
      lower_ = std::min(lower_, diag_[i] - radius);
      upper_ = std::max(upper_, diag_[i] + radius);
      scale_ = std::max(scale_, std::abs(diag_[i]));
      if (i + 1 < n)
        scale_ = std::max(scale_, std::abs(offdiag_[i]));
    }
    scale_ = std::max(scale_, 1.0);
  }

  std::vector<double> diag_, offdiag_, grid_, weight_;
  double step_ = 0.0;
  double lower_ = 0.0, upper_ = 0.0, scale_ = 1.0;
};

/// Debug dump with columns `j,r,diag,offdiag` (offdiag couples j and j+1).
inline void write_matrix_csv(const SymTridiagonal &t, std::ostream &out) {
  out << "j,r,diag,offdiag\n";
  for (std::size_t j = 0; j < t.size(); ++j) {
    out << (j + 1) << ','
        << (t.grid().empty() ? std::string() : format_double(t.grid()[j])) << ','
        << format_double(t.diag()[j]) << ','
        << (j + 1 < t.size() ? format_double(t.offdiag()[j]) : std::string()) << '\n';
  }
}

} // namespace maglap
