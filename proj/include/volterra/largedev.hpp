#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "volterra/counter_rng.hpp"
#include "volterra/grid.hpp"
#include "volterra/kernel.hpp"

namespace volterra {

/// Probability density on (0, inf) whose restriction to (0, 1) is a kernel
/// t^r f(t). The (r, f(0), f'(0)) triple is stored per family rather than
/// inferred.
class DensitySpec {
 public:
  enum class Family { uniform01, exponential, gamma, kernel };

  static DensitySpec uniform01();
  static DensitySpec exponential(double rate);
  static DensitySpec gamma(double shape, double rate);
  /// Density equal to k on (0, 1); any remaining mass lies beyond 1.
  static DensitySpec from_kernel(SmoothFactorKernel k, double total_mass = 1.0);

  Family family() const noexcept { return family_; }
  double shape() const noexcept { return shape_; }
  double rate() const noexcept { return rate_; }
  double normalization() const noexcept { return 1.0; }

  Kernel restriction() const;
  double r() const;
  double f0() const;
  double f1() const;

  bool has_sampler() const;
  /// One draw; throws UnsupportedError without a sampler.
  double sample(CounterStream& stream) const;

  /// Canonical spec string, e.g. "gamma:shape=2,rate=1".
  std::string label() const;

 private:
  friend DensitySpec parse_density_spec(std::string_view text);
  DensitySpec(Family family, double shape, double rate, std::optional<SmoothFactorKernel> kernel, std::string label);

  Family family_;
  double shape_;
  double rate_;
  std::optional<SmoothFactorKernel> kernel_;
  std::string label_;
};

/// "uniform01" | "exponential[:rate=b]" | "gamma:shape=a[,rate=b]" | "kernel:<kernel spec>"
DensitySpec parse_density_spec(std::string_view text);

/// log P(S_n <= 1) = log int_0^1 k^{*n} on the grid; -inf when the density
/// vanishes on (0, 1).
double prob_sum_leq1_grid(const DensitySpec& d, int n, GridSpec grid);

struct McEstimate {
  double estimate;
  double std_error;
};

/// Fraction of trials with X_1 + ... + X_n <= 1; trials >= 1000.
McEstimate prob_sum_leq1_mc(const DensitySpec& d, int n, std::int64_t trials, std::uint64_t seed);

/// Closed-form log P(S_n <= 1) for uniform01 (1/n!), exponential and gamma
/// (regularized incomplete gamma); nullopt for kernel densities.
std::optional<double> log_prob_oracle(const DensitySpec& d, int n);

/// log of (f(0) Gamma(r+1))^n e^{f'(0)/f(0)} / Gamma((r+1)n + 1).
double log_prob_asymptotic(const DensitySpec& d, double n);

struct LargeDevRow {
  int n;
  double log_p_grid;
  std::optional<double> log_p_oracle;
  std::optional<double> mc_estimate;
  std::optional<double> mc_stderr;
  bool below_mc_resolution;
  double log_p_asymptotic;
  double ratio_grid_over_asym;
};

struct LargeDevReport {
  std::string density;
  std::size_t cells;
  std::int64_t trials;
  std::uint64_t seed;
  std::vector<LargeDevRow> rows;
};

/// One row per n. Monte Carlo is skipped (columns empty) when trials == 0
/// or the density has no sampler, and reported as 0 with the
/// below_mc_resolution flag when the asymptotic probability is < 10/trials.
LargeDevReport largedev_report(const DensitySpec& d, const std::vector<int>& n_values, GridSpec grid,
                               std::int64_t trials, std::uint64_t seed);

/// CSV "n,log_p_grid,log_p_oracle,mc_estimate,mc_stderr,log_p_asym,ratio"
/// after one '#' comment line, which also lists rows flagged below_mc_resolution;
/// absent values are empty fields.
void write_csv(std::ostream& os, const LargeDevReport& report);

}  // namespace volterra
