#pragma once

#include <string_view>
#include <vector>

#include "volterra/grid.hpp"
#include "volterra/holder.hpp"
#include "volterra/kernel.hpp"
#include "volterra/norms.hpp"

namespace volterra {

enum class Formula { s_norm_exact, s_norm_asym, t_norm_asym, vn_exp, vn_powexp, vn_main, prob_largedev };

std::string_view to_string(Formula formula);

struct AsymptoticValue {
  double log_value;
  double n_or_lambda;
  Formula formula;
};

/// One row of ||u_n - v_n|| / ||u_n|| for operator sequences.
struct EquivalenceRow {
  int n;
  double log_norm_a;
  double log_norm_b;
  double log_diff_norm;
  double ratio;
};
using EquivalenceTrace = std::vector<EquivalenceRow>;

// ---- rank-one comparison operators S_lambda u = <u, e_{-lambda}> e_lambda ----

/// log ||S_lambda||_p = log ||e_lambda||_p + log ||e_{-lambda}||_q, any real lambda.
double s_lambda_norm_exact(double lambda, const HolderExponent& p);

/// log(C_p e^lambda / lambda), lambda > 0. Tag s-norm-asym; the truncated
/// operator T_lambda has the same asymptote (tag t-norm-asym).
AsymptoticValue s_lambda_norm_asymptotic(double lambda, const HolderExponent& p);

/// Applies S_lambda on the grid, inner product by exact cell means of e_{-lambda}.
ScaledGridFunction rank1_apply(double lambda, const ScaledGridFunction& u);

/// log(||S_lambda - T_lambda||_p / ||S_lambda||_p) on the grid.
///
/// S_lambda - T_lambda = R V_{e_{-lambda}} R with R the reflection, so the
/// numerator is the norm of V with kernel e_{-lambda} (exact at p = 1, inf,
/// SVD at p = 2, its L1 upper bound otherwise).
double truncation_gap(double lambda, const HolderExponent& p, GridSpec grid);

// ---- norm asymptotics ----

/// log of C_p (|f(0)| Gamma(r+1))^n e^{f'(0)/f(0)} / Gamma((r+1)n + 1).
///
/// Power-exponential kernels use f(0) = c, f'(0)/f(0) = mu and the same
/// expression, so both routes agree bit for bit. Real n > 0.
AsymptoticValue asymptotic_norm(const Kernel& k, double n, const HolderExponent& p);

/// Extremal trial function f_n:
///   p = 1      e^{-g(n) n t}, g(n) = sqrt(n) or log(1+n)
///   1 < p < inf e^{-((r+1)n - 1 + mu) t / (p-1)}
///   p = inf    1
enum class GrowthChoice { sqrt, log };
GrowthChoice parse_growth_choice(std::string_view text);

ScaledGridFunction extremal_function(const HolderExponent& p, double r, double mu, double n, GrowthChoice g,
                                     GridSpec grid);

/// op_norm seeded with the extremal function of the kernel's tangent
/// kernel when the discretized kernel is nonnegative.
NormEstimate seeded_op_norm(const Kernel& k, GridSpec grid, int n, const HolderExponent& p,
                            NormOptions options = {});

/// Rayleigh quotient of the extremal function and the matching norm.
struct ExtremalRow {
  int n;
  double log_rayleigh;
  double log_norm;
  double efficiency;
};
ExtremalRow extremal_efficiency(const Kernel& k, GridSpec grid, int n, const HolderExponent& p,
                                GrowthChoice g = GrowthChoice::sqrt, const NormOptions& options = {});

// ---- asymptotic equivalence ----

/// ||V_{kA}^n - V_{kB}^n||_p / ||V_{kA}^n||_p. For p outside {1, 2, inf} the
/// numerator is ||kA^{*n} - kB^{*n}||_1, so the ratio is an upper bound.
EquivalenceRow equivalence_ratio(const ScaledGridFunction& ka, const ScaledGridFunction& kb, int n,
                                 const HolderExponent& p, const NormOptions& options = {});

EquivalenceTrace equivalence_trace(const ScaledGridFunction& ka, const ScaledGridFunction& kb,
                                   const std::vector<int>& ns, const HolderExponent& p,
                                   const NormOptions& options = {});

/// n^degree * int_0^{1-delta} k^{*(n-j)} / ||V_k^n||_p (lower bound of the norm).
double decay_ratio(const SmoothFactorKernel& k, GridSpec grid, int n, int j, double delta, int degree,
                   const HolderExponent& p, const NormOptions& options = {});

}  // namespace volterra
