#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>

#include "volterra/grid.hpp"
#include "volterra/holder.hpp"

namespace volterra {

enum class NormMethod { exact_l1, svd_p2, power_iteration, bound_only };
enum class MethodChoice { automatic, exact_l1, svd_p2, power_iteration };

std::string_view to_string(NormMethod method);
/// "auto", "exact-l1", "svd-p2" / "svd", "power-iteration" / "power".
MethodChoice parse_method_choice(std::string_view text);

/// Lower/upper bounds on log ||V||_p for a Volterra operator on the grid.
struct NormEstimate {
  HolderExponent p = HolderExponent::one();
  double log_lower = 0.0;
  double log_upper = 0.0;
  NormMethod method = NormMethod::bound_only;
  int iterations = 0;
};

struct NormOptions {
  MethodChoice method = MethodChoice::automatic;
  double tol = 1e-8;
  int max_iterations = 10000;
  /// Starting vector for power iteration; constant 1 when absent.
  std::optional<ScaledGridFunction> initial;
};

/// Power iteration hit its cap; best() holds the bounds reached so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& message, NormEstimate best)
      : std::runtime_error(message), best_(best) {}
  const NormEstimate& best() const noexcept { return best_; }

 private:
  NormEstimate best_;
};

/// log ||f||_p, with ||f||_p = (h sum |f_j|^p)^{1/p} and the max for p = inf.
double lp_norm(const ScaledGridFunction& f, const HolderExponent& p);

/// V_k u = k * u; the same linear map as convolve().
ScaledGridFunction volterra_apply(const ScaledGridFunction& k, const ScaledGridFunction& u);

/// Norm of the operator whose kernel is `kernel` (already powered).
///
/// Method selection under MethodChoice::automatic:
///   p in {1, inf}         exact ||kernel||_1
///   p = 2                 largest singular value of the grid matrix
///   other p, kernel >= 0  nonlinear power iteration (lower bound) with
///                         ||kernel||_1 as upper bound
///   other p, signed       bound_only: trial vectors plus a short
///                         iteration for the lower bound
NormEstimate operator_norm(const ScaledGridFunction& kernel, const HolderExponent& p, const NormOptions& options = {});

/// Norm of V_k^n: powers k numerically, then operator_norm.
NormEstimate op_norm(const ScaledGridFunction& k, int n, const HolderExponent& p, const NormOptions& options = {});

/// log ||V_k^n u||_p - log ||u||_p; throws DomainError for u = 0.
double rayleigh_quotient(const ScaledGridFunction& k, int n, const ScaledGridFunction& u, const HolderExponent& p);

/// Largest singular value (log) of the grid matrix of V_kernel and its
/// right singular vector.
struct SingularPair {
  double log_sigma;
  ScaledGridFunction right;
};
SingularPair top_singular_pair(const ScaledGridFunction& kernel);

}  // namespace volterra
