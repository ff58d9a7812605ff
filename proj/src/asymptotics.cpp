#include "volterra/asymptotics.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <optional>
#include <string>

#include "volterra/errors.hpp"
#include "volterra/special.hpp"

namespace volterra {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log ||e_rate||_s for an exponent s in [1, inf].
double log_exp_norm(double rate, double s) {
  if (std::isinf(s)) return std::max(0.0, rate);
  return log_expm1_ratio(s * rate) / s;
}

// Tangent parameters (r, mu) of a kernel, if it has one.
struct Tangent {
  double r;
  double mu;
};

std::optional<Tangent> tangent_of(const Kernel& k) {
  if (const auto* pe = std::get_if<PowerExpKernel>(&k)) return Tangent{pe->r, pe->mu};
  const auto& sf = std::get<SmoothFactorKernel>(k);
  if (sf.f0() == 0.0) return std::nullopt;
  return Tangent{sf.r(), sf.f1() / sf.f0()};
}

}  // namespace

std::string_view to_string(Formula formula) {
  switch (formula) {
    case Formula::s_norm_exact:
      return "S-norm-exact";
    case Formula::s_norm_asym:
      return "S-norm-asym";
    case Formula::t_norm_asym:
      return "T-norm-asym";
    case Formula::vn_exp:
      return "Vn-exp";
    case Formula::vn_powexp:
      return "Vn-powexp";
    case Formula::vn_main:
      return "Vn-main";
    case Formula::prob_largedev:
      return "prob-largedev";
  }
  return "unknown";
}

double s_lambda_norm_exact(double lambda, const HolderExponent& p) {
  return log_exp_norm(lambda, p.p()) + log_exp_norm(-lambda, p.q());
}

AsymptoticValue s_lambda_norm_asymptotic(double lambda, const HolderExponent& p) {
  if (!(lambda > 0.0)) throw DomainError("S_lambda asymptote needs lambda > 0");
  return {log_cp_constant(p) + lambda - std::log(lambda), lambda, Formula::s_norm_asym};
}

ScaledGridFunction rank1_apply(double lambda, const ScaledGridFunction& u) {
  const GridSpec grid = u.grid();
  if (u.is_zero()) return ScaledGridFunction::zero(grid);
  const auto decaying = exponential_cell_means(-lambda, grid);
  double dot = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) dot += u.values()[j] * decaying.values()[j];
  if (dot == 0.0) return ScaledGridFunction::zero(grid);
  const double log_dot = std::log(std::abs(dot)) + std::log(grid.step()) + u.log_scale() + decaying.log_scale();
  const auto out = exponential_cell_means(lambda, grid).scaled(log_dot);
  return dot < 0.0 ? out.negated() : out;
}

double truncation_gap(double lambda, const HolderExponent& p, GridSpec grid) {
  const auto kernel = exponential_cell_means(-lambda, grid);
  return operator_norm(kernel, p).log_upper - s_lambda_norm_exact(lambda, p);
}

AsymptoticValue asymptotic_norm(const Kernel& k, double n, const HolderExponent& p) {
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("asymptotic norm needs n > 0");
  if (const auto* sf = std::get_if<SmoothFactorKernel>(&k)) {
    // The tangent kernel carries exactly the symbols the formula consumes.
    auto value = asymptotic_norm(Kernel{tangent_kernel(*sf)}, n, p);
    value.formula = Formula::vn_main;
    return value;
  }
  const auto& pe = std::get<PowerExpKernel>(k);
  pe.validate();
  const double a = pe.r + 1.0;
  const double log_value = log_cp_constant(p) + n * (pe.log_c + log_gamma(a)) + pe.mu - log_gamma(a * n + 1.0);
  const bool pure_exponential = pe.r == 0.0 && pe.log_c == 0.0 && pe.sign == 1;
  return {log_value, n, pure_exponential ? Formula::vn_exp : Formula::vn_powexp};
}

GrowthChoice parse_growth_choice(std::string_view text) {
  if (text == "sqrt") return GrowthChoice::sqrt;
  if (text == "log") return GrowthChoice::log;
  throw UsageError("unknown growth function '" + std::string(text) + "' (expected sqrt or log)");
}

ScaledGridFunction extremal_function(const HolderExponent& p, double r, double mu, double n, GrowthChoice g,
                                     GridSpec grid) {
  if (!(n >= 1.0)) throw DomainError("extremal function needs n >= 1");
  double rate = 0.0;
  if (p.is_one()) {
    const double growth = g == GrowthChoice::sqrt ? std::sqrt(n) : std::log1p(n);
    rate = -growth * n;
  } else if (!p.is_infinity()) {
    rate = -((r + 1.0) * n - 1.0 + mu) / (p.p() - 1.0);
  }
  return exponential_cell_means(rate, grid);
}

NormEstimate seeded_op_norm(const Kernel& k, GridSpec grid, int n, const HolderExponent& p, NormOptions options) {
  const auto discrete = discretize(k, grid);
  if (!options.initial && discrete.is_nonnegative()) {
    if (const auto t = tangent_of(k)) options.initial = extremal_function(p, t->r, t->mu, n, GrowthChoice::sqrt, grid);
  }
  return op_norm(discrete, n, p, options);
}

ExtremalRow extremal_efficiency(const Kernel& k, GridSpec grid, int n, const HolderExponent& p, GrowthChoice g,
                                const NormOptions& options) {
  const auto t = tangent_of(k);
  if (!t) throw DomainError("extremal function needs f(0) != 0");
  const auto estimate = seeded_op_norm(k, grid, n, p, options);
  const auto trial = extremal_function(p, t->r, t->mu, n, g, grid);
  const double log_rayleigh = rayleigh_quotient(discretize(k, grid), n, trial, p);
  return {n, log_rayleigh, estimate.log_lower, std::exp(log_rayleigh - estimate.log_lower)};
}

EquivalenceRow equivalence_ratio(const ScaledGridFunction& ka, const ScaledGridFunction& kb, int n,
                                 const HolderExponent& p, const NormOptions& options) {
  if (ka.is_zero()) throw DomainError("equivalence ratio needs a nonzero reference kernel");
  const auto power_a = conv_power_numeric(ka, n);
  const auto power_b = conv_power_numeric(kb, n);
  const auto diff = difference(power_a, power_b);

  NormOptions plain = options;
  plain.initial.reset();
  const double log_a = operator_norm(power_a, p, plain).log_lower;
  const double log_b = kb.is_zero() ? kNegInf : operator_norm(power_b, p, plain).log_lower;
  double log_diff = restricted_l1(diff, 1.0);
  if (p.is_two() && !diff.is_zero()) {
    NormOptions svd = plain;
    svd.method = MethodChoice::svd_p2;
    log_diff = operator_norm(diff, p, svd).log_upper;
  }
  const double ratio = log_diff == kNegInf ? 0.0 : std::exp(log_diff - log_a);
  return {n, log_a, log_b, log_diff, ratio};
}

EquivalenceTrace equivalence_trace(const ScaledGridFunction& ka, const ScaledGridFunction& kb,
                                   const std::vector<int>& ns, const HolderExponent& p, const NormOptions& options) {
  EquivalenceTrace trace;
  trace.reserve(ns.size());
  for (int n : ns) trace.push_back(equivalence_ratio(ka, kb, n, p, options));
  std::sort(trace.begin(), trace.end(), [](const auto& x, const auto& y) { return x.n < y.n; });
  return trace;
}

double decay_ratio(const SmoothFactorKernel& k, GridSpec grid, int n, int j, double delta, int degree,
                   const HolderExponent& p, const NormOptions& options) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("decay ratio needs 0 < delta < 1");
  if (j < 0 || j >= n) throw DomainError("decay ratio needs 0 <= j < n");
  if (degree < 0) throw DomainError("decay ratio needs a nonnegative polynomial degree");
  const auto discrete = discretize(k, grid);
  const double log_mass = restricted_l1(conv_power_numeric(discrete, n - j), 1.0 - delta);
  const double log_norm = seeded_op_norm(Kernel{k}, grid, n, p, options).log_lower;
  return std::exp(degree * std::log(static_cast<double>(n)) + log_mass - log_norm);
}

}  // namespace volterra
