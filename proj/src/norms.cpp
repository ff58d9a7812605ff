#include "volterra/norms.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "volterra/errors.hpp"

namespace volterra {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Mantissa weights of the grid matrix: M_ij = h e^{scale} w_{i-j} for i >= j,
// w_0 = v_0 / 2, w_l = (v_l + v_{l-1}) / 2. This is exactly convolve().
std::vector<double> toeplitz_weights(const ScaledGridFunction& kernel) {
  const auto v = kernel.values();
  std::vector<double> w(v.size());
  w[0] = 0.5 * v[0];
  for (std::size_t l = 1; l < v.size(); ++l) w[l] = 0.5 * (v[l] + v[l - 1]);
  return w;
}

std::vector<double> apply_lower(const std::vector<double>& w, const std::vector<double>& x) {
  const std::size_t m = w.size();
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += w[i - j] * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<double> apply_transpose(const std::vector<double>& w, const std::vector<double>& y) {
  const std::size_t m = w.size();
  std::vector<double> z(m);
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (std::size_t i = j; i < m; ++i) acc += w[i - j] * y[i];
    z[j] = acc;
  }
  return z;
}

Eigen::MatrixXd dense_matrix(const std::vector<double>& w) {
  const auto m = static_cast<Eigen::Index>(w.size());
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) mat(i, j) = w[static_cast<std::size_t>(i - j)];
  return mat;
}

// log of the discrete l^p norm of x (no h weight).
double log_lp(const std::vector<double>& x, const HolderExponent& p) {
  double top = 0.0;
  for (double v : x) top = std::max(top, std::abs(v));
  if (top == 0.0) return kNegInf;
  if (p.is_infinity()) return std::log(top);
  double acc = 0.0;
  if (p.is_one()) {
    for (double v : x) acc += std::abs(v);
  } else {
    for (double v : x) acc += std::pow(std::abs(v) / top, p.p());
    return std::log(top) + std::log(acc) / p.p();
  }
  return std::log(acc);
}

// x -> sign(x) |x / max|x||^{e}
std::vector<double> signed_power(const std::vector<double>& x, double e) {
  double top = 0.0;
  for (double v : x) top = std::max(top, std::abs(v));
  std::vector<double> out(x.size(), 0.0);
  if (top == 0.0) return out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::abs(x[i]) / top;
    const double powered = e == 1.0 ? a : std::pow(a, e);
    out[i] = x[i] < 0.0 ? -powered : powered;
  }
  return out;
}

struct IterationResult {
  double log_best;  // mantissa units (no h, no scale)
  int iterations;
  bool converged;
};

// Boyd's nonlinear power method for max ||W x||_p / ||x||_p.
IterationResult boyd_iteration(const std::vector<double>& w, std::vector<double> x, const HolderExponent& p,
                               double tol, int max_iterations) {
  const double ep = p.p() - 1.0;
  const double eq = p.q() - 1.0;
  double best = kNegInf;
  double prev = kNegInf;
  for (int it = 1; it <= max_iterations; ++it) {
    const double log_x = log_lp(x, p);
    if (log_x == kNegInf) return {best, it, false};
    const auto y = apply_lower(w, x);
    const double rho = log_lp(y, p) - log_x;
    best = std::max(best, rho);
    if (it > 1 && std::abs(std::expm1(rho - prev)) <= tol) return {best, it, true};
    prev = rho;
    x = signed_power(apply_transpose(w, signed_power(y, ep)), eq);
  }
  return {best, max_iterations, false};
}

std::vector<double> initial_vector(const ScaledGridFunction& kernel, const NormOptions& options) {
  if (options.initial) {
    if (!(options.initial->grid() == kernel.grid())) throw UsageError("initial vector lives on a different grid");
    if (!options.initial->is_zero()) {
      const auto v = options.initial->values();
      return {v.begin(), v.end()};
    }
  }
  return std::vector<double>(kernel.size(), 1.0);
}

NormEstimate svd_estimate(const ScaledGridFunction& kernel, const HolderExponent& p, double log_offset) {
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(dense_matrix(toeplitz_weights(kernel)));
  const double sigma = svd.singularValues()(0);
  // Backward-stable SVD: error in sigma bounded by a modest multiple of m eps ||W||.
  const double slack = 8.0 * static_cast<double>(kernel.size()) * DBL_EPSILON;
  const double log_sigma = std::log(sigma) + log_offset;
  return {p, log_sigma + std::log1p(-slack), log_sigma + std::log1p(slack), NormMethod::svd_p2, 0};
}

NormEstimate bound_only_estimate(const ScaledGridFunction& kernel, const HolderExponent& p, double log_offset,
                                 double log_l1, const NormOptions& options) {
  const auto w = toeplitz_weights(kernel);
  const GridSpec grid = kernel.grid();
  std::vector<std::vector<double>> trials;
  trials.emplace_back(kernel.size(), 1.0);
  if (options.initial && options.initial->grid() == grid && !options.initial->is_zero()) {
    trials.emplace_back(options.initial->values().begin(), options.initial->values().end());
  }
  for (double rate : {1.0, 4.0, 16.0, 64.0, 256.0}) {
    for (double sgn : {-1.0, 1.0}) {
      const auto f = exponential_cell_means(sgn * rate, grid);
      trials.emplace_back(f.values().begin(), f.values().end());
    }
  }
  double best = kNegInf;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const double rho = log_lp(apply_lower(w, trials[i]), p) - log_lp(trials[i], p);
    if (rho > best) {
      best = rho;
      best_index = i;
    }
  }
  // A short iteration from the best trial can only raise the lower bound.
  const auto refined = boyd_iteration(w, trials[best_index], p, options.tol, 25);
  best = std::max(best, refined.log_best);
  const double lower = std::min(best + log_offset, log_l1);
  return {p, lower, log_l1, NormMethod::bound_only, refined.iterations};
}

}  // namespace

std::string_view to_string(NormMethod method) {
  switch (method) {
    case NormMethod::exact_l1:
      return "exact-l1";
    case NormMethod::svd_p2:
      return "svd-p2";
    case NormMethod::power_iteration:
      return "power-iteration";
    case NormMethod::bound_only:
      return "bound-only";
  }
  return "unknown";
}

MethodChoice parse_method_choice(std::string_view text) {
  if (text == "auto") return MethodChoice::automatic;
  if (text == "exact-l1") return MethodChoice::exact_l1;
  if (text == "svd" || text == "svd-p2") return MethodChoice::svd_p2;
  if (text == "power" || text == "power-iteration") return MethodChoice::power_iteration;
  throw UsageError("unknown norm method '" + std::string(text) + "'");
}

double lp_norm(const ScaledGridFunction& f, const HolderExponent& p) {
  if (f.is_zero()) return kNegInf;
  const auto v = f.values();
  const double log_l = log_lp({v.begin(), v.end()}, p);
  if (p.is_infinity()) return log_l + f.log_scale();
  return log_l + std::log(f.grid().step()) / p.p() + f.log_scale();
}

ScaledGridFunction volterra_apply(const ScaledGridFunction& k, const ScaledGridFunction& u) { return convolve(k, u); }

NormEstimate operator_norm(const ScaledGridFunction& kernel, const HolderExponent& p, const NormOptions& options) {
  if (!(options.tol > 0.0)) throw UsageError("norm tolerance must be positive");
  const bool endpoint = p.is_one() || p.is_infinity();
  MethodChoice choice = options.method;
  if (choice == MethodChoice::exact_l1 && !endpoint) throw UsageError("exact-l1 applies only to p = 1 or p = inf");
  if (choice == MethodChoice::svd_p2 && !p.is_two()) throw UsageError("svd applies only to p = 2");
  if (choice == MethodChoice::power_iteration && endpoint) {
    throw UsageError("power iteration needs 1 < p < inf");
  }
  if (choice == MethodChoice::automatic) {
    choice = endpoint ? MethodChoice::exact_l1 : p.is_two() ? MethodChoice::svd_p2 : MethodChoice::power_iteration;
  }

  const double log_l1 = restricted_l1(kernel, 1.0);
  if (kernel.is_zero()) {
    const NormMethod tag = choice == MethodChoice::exact_l1 ? NormMethod::exact_l1
                           : choice == MethodChoice::svd_p2  ? NormMethod::svd_p2
                                                             : NormMethod::power_iteration;
    return {p, kNegInf, kNegInf, tag, 0};
  }
  if (choice == MethodChoice::exact_l1) return {p, log_l1, log_l1, NormMethod::exact_l1, 0};

  const double log_offset = std::log(kernel.grid().step()) + kernel.log_scale();
  if (choice == MethodChoice::svd_p2) return svd_estimate(kernel, p, log_offset);

  if (!kernel.is_nonnegative() && !p.is_two()) return bound_only_estimate(kernel, p, log_offset, log_l1, options);

  const auto result =
      boyd_iteration(toeplitz_weights(kernel), initial_vector(kernel, options), p, options.tol, options.max_iterations);
  const NormEstimate estimate{p, std::min(result.log_best + log_offset, log_l1), log_l1, NormMethod::power_iteration,
                              result.iterations};
  if (!result.converged) {
    throw ConvergenceError("power iteration did not converge within " + std::to_string(options.max_iterations) +
                               " iterations",
                           estimate);
  }
  return estimate;
}

NormEstimate op_norm(const ScaledGridFunction& k, int n, const HolderExponent& p, const NormOptions& options) {
  return operator_norm(conv_power_numeric(k, n), p, options);
}

double rayleigh_quotient(const ScaledGridFunction& k, int n, const ScaledGridFunction& u, const HolderExponent& p) {
  if (u.is_zero()) throw DomainError("Rayleigh quotient of the zero function");
  const auto image = volterra_apply(conv_power_numeric(k, n), u);
  return lp_norm(image, p) - lp_norm(u, p);
}

SingularPair top_singular_pair(const ScaledGridFunction& kernel) {
  if (kernel.is_zero()) throw DomainError("singular pair of the zero operator");
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(dense_matrix(toeplitz_weights(kernel)), Eigen::ComputeThinV);
  Eigen::VectorXd v = svd.matrixV().col(0);
  if (v.sum() < 0.0) v = -v;
  const double log_sigma =
      std::log(svd.singularValues()(0)) + std::log(kernel.grid().step()) + kernel.log_scale();
  return {log_sigma, ScaledGridFunction(kernel.grid(), std::vector<double>(v.data(), v.data() + v.size()))};
}

}  // namespace volterra
