#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "volterra/kernel.hpp"

namespace volterra {

/// Uniform partition of (0, 1) into m = 2^k >= 8 cells of width h = 1/m.
class GridSpec {
 public:
  explicit GridSpec(std::size_t cells);

  std::size_t cells() const noexcept { return cells_; }
  double step() const noexcept { return step_; }
  double midpoint(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) * step_; }

  bool operator==(const GridSpec&) const = default;

 private:
  std::size_t cells_;
  double step_;
};

inline constexpr std::size_t kDefaultCells = 4096;

/// Cell representatives values[j] * e^{log_scale} of a function on (0, 1).
///
/// Mantissas are renormalized by an exact power of two so that
/// max |values| lies in [1/2, 1); the zero function has log_scale = -inf.
class ScaledGridFunction {
 public:
  ScaledGridFunction(GridSpec grid, std::vector<double> values, double log_scale = 0.0);

  static ScaledGridFunction zero(GridSpec grid);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double log_scale() const noexcept { return log_scale_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// values[j] * e^{log_scale}; may underflow or overflow.
  double value(std::size_t j) const;
  bool is_zero() const noexcept;
  bool is_nonnegative() const noexcept;

  /// Multiplication by e^{log_factor}: mantissas untouched.
  ScaledGridFunction scaled(double log_factor) const;
  ScaledGridFunction negated() const;

 private:
  void normalize();

  GridSpec grid_;
  std::vector<double> values_;
  double log_scale_;
};

/// Cell representative: exact cell mean of t^r times the smooth factor at
/// the cell midpoint (c e^{mu t} for power-exponential kernels).
ScaledGridFunction discretize(const Kernel& k, GridSpec grid);

/// Exact cell means of e^{rate t}.
ScaledGridFunction exponential_cell_means(double rate, GridSpec grid);

/// Truncated causal convolution on (0, 1).
///
/// c_j = (h/2) (P_j + P_{j-1}) with P_j = sum_{i<=j} a_i b_{j-i}: the exact
/// cell mean of the convolution of the piecewise-constant functions a and
/// b. Only cells below t = 1 are produced.
ScaledGridFunction convolve(const ScaledGridFunction& a, const ScaledGridFunction& b);

/// k^{*n} by left-to-right binary powering; n >= 1.
ScaledGridFunction conv_power_numeric(const ScaledGridFunction& k, int n);

/// log of the integral of |f| over [0, upper); the cell containing upper
/// contributes proportionally. upper in (0, 1].
double restricted_l1(const ScaledGridFunction& f, double upper = 1.0);

/// a - b on the larger of the two scales.
ScaledGridFunction difference(const ScaledGridFunction& a, const ScaledGridFunction& b);

/// CSV with header "t,mantissa,log_scale" (t = cell midpoint), preceded by
/// one '#' comment line.
void write_csv(std::ostream& os, const ScaledGridFunction& f);

}  // namespace volterra
