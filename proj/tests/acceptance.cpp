// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failures.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "volterra/asymptotics.hpp"
#include "volterra/kernel_spec.hpp"
#include "volterra/largedev.hpp"
#include "volterra/norms.hpp"

using namespace volterra;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* pattern, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string join(const std::vector<double>& xs, const char* pattern = "%.6g") {
  std::string s;
  for (double x : xs) s += (s.empty() ? "" : " ") + fmt(pattern, x);
  return s;
}

const HolderExponent kP1 = HolderExponent::one();
const HolderExponent kP2 = HolderExponent::from_ratio(2, 1);

Outcome uniform_large_deviations() {
  const GridSpec grid(4096);
  const auto d = DensitySpec::uniform01();
  bool ok = true;
  double worst_rel = 0.0, worst_z = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const double exact = 1.0 / std::tgamma(n + 1.0);
    const double grid_p = std::exp(prob_sum_leq1_grid(d, n, grid));
    const double rel = std::abs(grid_p / exact - 1.0);
    const auto mc = prob_sum_leq1_mc(d, n, 1000000, 42);
    const double z = std::abs(mc.estimate - grid_p) / mc.std_error;
    worst_rel = std::max(worst_rel, rel);
    worst_z = std::max(worst_z, z);
    ok = ok && rel < 1e-3 && z <= 4.0;
  }
  return {ok, "max rel err " + fmt("%.3g", worst_rel) + ", max |mc - grid|/stderr " + fmt("%.3g", worst_z)};
}

Outcome triangular_density() {
  const GridSpec grid(4096);
  const auto d = parse_density_spec("kernel:poly:r=1,f=2");
  bool ok = true;
  double worst_rel = 0.0, worst_asym = 0.0;
  for (int n = 2; n <= 4; ++n) {
    const double log_exact = n * std::log(2.0) - std::lgamma(2.0 * n + 1.0);
    const double rel = std::abs(std::expm1(prob_sum_leq1_grid(d, n, grid) - log_exact));
    const double asym = std::abs(log_prob_asymptotic(d, n) - log_exact);
    worst_rel = std::max(worst_rel, rel);
    worst_asym = std::max(worst_asym, asym);
    ok = ok && rel < 1e-3 && asym <= 1e-12;
  }
  return {ok, "max rel err " + fmt("%.3g", worst_rel) + ", |log asym - log exact| " + fmt("%.3g", worst_asym)};
}

// sum_{j >= n} n!/j!
double exponential_ratio_series(int n) {
  double sum = 0.0, term = 1.0;
  for (int j = n; term > 1e-18; ++j) {
    sum += term;
    term /= (j + 1);
  }
  return sum;
}

Outcome exponential_ratio() {
  const GridSpec grid(4096);
  const auto d = DensitySpec::exponential(1.0);
  std::vector<double> ratios;
  for (int n : {5, 10, 20, 40}) ratios.push_back(std::exp(prob_sum_leq1_grid(d, n, grid) - log_prob_asymptotic(d, n)));
  const double target = exponential_ratio_series(20);
  bool monotone = true;
  for (std::size_t i = 1; i < ratios.size(); ++i) monotone = monotone && ratios[i] < ratios[i - 1] && ratios[i] > 1.0;
  const bool ok = std::abs(ratios[2] - target) <= 1e-2 && monotone;
  return {ok, "ratios(5,10,20,40) " + join(ratios) + ", series at 20 " + fmt("%.6f", target)};
}

Outcome classical_singular_value() {
  const GridSpec grid(2048);
  const auto e = op_norm(discretize(Kernel{PowerExpKernel{}}, grid), 1, kP2);
  const double target = 2.0 / std::numbers::pi;
  const double lo = std::exp(e.log_lower), hi = std::exp(e.log_upper);
  const bool ok = std::abs(lo / target - 1.0) < 1e-3 && std::abs(hi / target - 1.0) < 1e-3;
  return {ok, "[" + fmt("%.10f", lo) + ", " + fmt("%.10f", hi) + "] vs 2/pi " + fmt("%.10f", target)};
}

Outcome norm_asymptotics_p2() {
  const GridSpec grid(2048);
  const auto k = discretize(Kernel{PowerExpKernel{}}, grid);
  std::vector<double> ratios;
  for (int n : {20, 40}) {
    const auto e = op_norm(k, n, kP2);
    ratios.push_back(std::exp(e.log_lower - asymptotic_norm(Kernel{PowerExpKernel{}}, n, kP2).log_value));
  }
  const bool ok = ratios[0] >= 0.9 && ratios[0] <= 1.1 && std::abs(ratios[1] - 1.0) < std::abs(ratios[0] - 1.0);
  return {ok, "ratio(20) " + fmt("%.6f", ratios[0]) + ", ratio(40) " + fmt("%.6f", ratios[1])};
}

Outcome s_lambda_ratio() {
  const double lambda = 10.0;
  bool ok = true;
  std::vector<double> ratios;
  for (const auto& p : {kP1, HolderExponent::from_ratio(3, 2), kP2, HolderExponent::from_ratio(4, 1),
                        HolderExponent::infinity()}) {
    const double ratio = std::exp(s_lambda_norm_exact(lambda, p) - s_lambda_norm_asymptotic(lambda, p).log_value);
    ratios.push_back(ratio);
    ok = ok && ratio >= 1.0 - 1e-3 && ratio <= 1.0;
  }
  return {ok, "ratios(1,3/2,2,4,inf) " + join(ratios, "%.8f")};
}

Outcome method_cross_validation() {
  const GridSpec grid(256);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NormOptions power;
  power.method = MethodChoice::power_iteration;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v(grid.cells());
    for (auto& x : v) x = u(rng);
    const ScaledGridFunction k(grid, std::move(v));
    const double svd = operator_norm(k, kP2).log_lower;
    const double pi = operator_norm(k, kP2, power).log_lower;
    worst = std::max(worst, std::abs(std::expm1(pi - svd)));
  }
  NormOptions opt;
  double worst_dual = 0.0;
  const auto unit = discretize(Kernel{PowerExpKernel{}}, grid);
  for (int n : {1, 5, 10}) {
    const double a = op_norm(unit, n, HolderExponent::from_ratio(3, 1), opt).log_lower;
    const double b = op_norm(unit, n, HolderExponent::from_ratio(3, 2), opt).log_lower;
    worst_dual = std::max(worst_dual, std::abs(std::expm1(a - b)));
  }
  const bool ok = worst <= 1e-6 && worst_dual <= 2.0 * opt.tol;
  return {ok, "max rel power vs svd " + fmt("%.3g", worst) + ", max rel ||.||_3 vs ||.||_3/2 " + fmt("%.3g", worst_dual)};
}

Outcome extremal_efficiency_trend() {
  const GridSpec grid(2048);
  std::vector<double> eff;
  for (int n : {10, 20, 30}) eff.push_back(extremal_efficiency(Kernel{PowerExpKernel{}}, grid, n, kP2).efficiency);
  const bool ok = eff[2] >= 0.95 && eff[1] >= eff[0] && eff[2] >= eff[1];
  return {ok, "efficiency(10,20,30) " + join(eff, "%.8f")};
}

Outcome equivalence_and_localisation() {
  const GridSpec grid(4096);
  const std::vector<int> ns{5, 10, 20, 40};
  auto trend = [&](const Kernel& a, const Kernel& b) {
    std::vector<double> r;
    for (const auto& row : equivalence_trace(discretize(a, grid), discretize(b, grid), ns, kP1)) r.push_back(row.ratio);
    return r;
  };
  auto decreasing = [](const std::vector<double>& r) {
    for (std::size_t i = 1; i < r.size(); ++i) {
      if (!(r[i] < r[i - 1])) return false;
    }
    return true;
  };
  const Kernel one_plus_t = parse_kernel_spec("poly:f=1,1");
  const Kernel tangent{tangent_kernel(std::get<SmoothFactorKernel>(one_plus_t))};
  const auto main_pair = trend(one_plus_t, tangent);
  const auto local_pair = trend(parse_kernel_spec("powexp:c=1"), parse_kernel_spec("table:f=1,1,1.5"));
  const bool ok = decreasing(main_pair) && main_pair.back() < 0.05 && decreasing(local_pair) && local_pair.back() < 0.05;
  return {ok, "1+t vs e^t " + join(main_pair, "%.4g") + "; localised pair " + join(local_pair, "%.3g")};
}

Outcome grid_refinement() {
  const auto k = PowerExpKernel::make(1.0, 0.0, -1.0);
  const auto exact = conv_power_closed_form(k, 5);
  std::vector<double> sup_err, cell_err;
  for (std::size_t m : {512u, 1024u, 2048u, 4096u}) {
    const GridSpec grid(m);
    const auto num = conv_power_numeric(discretize(Kernel{k}, grid), 5);
    const auto ref = discretize(Kernel{exact}, grid);
    double diff = 0.0, scale = 0.0, cell = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double d = std::abs(num.value(j) - ref.value(j));
      diff = std::max(diff, d);
      scale = std::max(scale, std::abs(ref.value(j)));
      cell = std::max(cell, d / std::abs(ref.value(j)));
    }
    sup_err.push_back(diff / scale);
    cell_err.push_back(cell);
  }
  bool ok = true;
  for (std::size_t i = 1; i < sup_err.size(); ++i) ok = ok && sup_err[i - 1] / sup_err[i] >= 3.0;
  return {ok, "sup-relative err(512..4096) " + join(sup_err, "%.3g") + "; per-cell max " + join(cell_err, "%.3g")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"uniform large deviations", uniform_large_deviations},
      {"triangular density exactness", triangular_density},
      {"exponential(1) asymptotic ratio", exponential_ratio},
      {"classical singular value 2/pi", classical_singular_value},
      {"norm asymptotics at p=2", norm_asymptotics_p2},
      {"S_lambda exact vs asymptotic", s_lambda_ratio},
      {"method cross-validation", method_cross_validation},
      {"extremal efficiency", extremal_efficiency_trend},
      {"equivalence and localisation", equivalence_and_localisation},
      {"grid refinement", grid_refinement},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
