#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "volterra/errors.hpp"
#include "volterra/norms.hpp"

using namespace volterra;

namespace {

const HolderExponent p1 = HolderExponent::one();
const HolderExponent p2 = HolderExponent::from_ratio(2, 1);
const HolderExponent p3 = HolderExponent::from_ratio(3, 1);
const HolderExponent p32 = HolderExponent::from_ratio(3, 2);
const HolderExponent pinf = HolderExponent::infinity();

ScaledGridFunction unit(GridSpec g) { return discretize(Kernel{PowerExpKernel{}}, g); }

ScaledGridFunction random_kernel(GridSpec g, std::mt19937_64& rng, bool nonnegative) {
  std::uniform_real_distribution<double> u(nonnegative ? 0.0 : -1.0, 1.0);
  std::vector<double> v(g.cells());
  for (auto& x : v) x = u(rng);
  return ScaledGridFunction(g, std::move(v));
}

}  // namespace

TEST_CASE("lp_norm of simple functions") {
  const GridSpec g(64);
  CHECK(lp_norm(unit(g), p3) == doctest::Approx(0.0).epsilon(1e-15));
  const auto t = discretize(Kernel{PowerExpKernel::make(1.0, 1.0, 0.0)}, g);
  CHECK(lp_norm(t, pinf) == doctest::Approx(std::log(g.midpoint(63))).epsilon(1e-15));
  // sum of midpoints^2 h = 1/3 - h^2/12
  CHECK(std::exp(2.0 * lp_norm(t, p2)) == doctest::Approx(1.0 / 3.0 - 1.0 / (12.0 * 64 * 64)).epsilon(1e-14));
  CHECK(std::isinf(lp_norm(ScaledGridFunction::zero(g), p2)));
}

TEST_CASE("norm of the integration operator") {
  const GridSpec g(512);
  const auto k = unit(g);
  CHECK(operator_norm(k, p1).log_lower == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(operator_norm(k, pinf).method == NormMethod::exact_l1);
  const auto e2 = operator_norm(k, p2);
  CHECK(e2.method == NormMethod::svd_p2);
  CHECK(std::exp(e2.log_lower) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-5));
  CHECK(e2.log_lower <= e2.log_upper);
}

TEST_CASE("norms of V^n for the unit kernel at p = 1") {
  const GridSpec g(1024);
  for (int n : {2, 5, 10}) {
    const auto e = op_norm(unit(g), n, p1);
    CHECK(e.log_lower == doctest::Approx(-std::lgamma(n + 1.0)).epsilon(1e-5));
  }
}

TEST_CASE("p = 2 power iteration agrees with the SVD") {
  std::mt19937_64 rng(5);
  const GridSpec g(64);
  NormOptions power;
  power.method = MethodChoice::power_iteration;
  power.tol = 1e-12;
  for (int i = 0; i < 5; ++i) {
    const auto k = random_kernel(g, rng, true);
    const auto svd = operator_norm(k, p2);
    const auto pi = operator_norm(k, p2, power);
    CHECK(pi.method == NormMethod::power_iteration);
    CHECK(pi.log_lower == doctest::Approx(svd.log_lower).epsilon(1e-7));
    const auto sp = top_singular_pair(k);
    CHECK(sp.log_sigma == doctest::Approx(svd.log_lower).epsilon(1e-10));
  }
}

TEST_CASE("sandwich and duality for p = 3 and 3/2") {
  std::mt19937_64 rng(9);
  const GridSpec g(128);
  NormOptions opt;
  opt.tol = 1e-10;
  for (int i = 0; i < 4; ++i) {
    const auto k = random_kernel(g, rng, true);
    const auto a = operator_norm(k, p3, opt);
    const auto b = operator_norm(k, p32, opt);
    CHECK(a.method == NormMethod::power_iteration);
    CHECK(a.log_lower <= a.log_upper);
    CHECK(std::abs(std::expm1(a.log_lower - b.log_lower)) < 1e-8);
    // Riesz-Thorin: log norm is convex in 1/p, so the p = 2 norm is below the p = 3 and p = 3/2 average
    CHECK(operator_norm(k, p2).log_lower <= 0.5 * (a.log_lower + b.log_lower) + 1e-9);
  }
}

TEST_CASE("signed kernels") {
  std::mt19937_64 rng(13);
  const GridSpec g(64);
  const auto k = random_kernel(g, rng, false);
  const auto e1 = operator_norm(k, p1);
  CHECK(e1.method == NormMethod::exact_l1);
  CHECK(e1.log_lower == e1.log_upper);
  const auto e3 = operator_norm(k, p3);
  CHECK(e3.method == NormMethod::bound_only);
  CHECK(e3.log_lower <= e3.log_upper);
  const auto e2 = operator_norm(k, p2);
  CHECK(e2.log_lower >= e3.log_lower - 1.0);
}

TEST_CASE("Rayleigh quotient is below the norm") {
  const GridSpec g(128);
  const auto k = discretize(Kernel{PowerExpKernel::make(1.0, 0.5, -1.0)}, g);
  const auto u = exponential_cell_means(-4.0, g);
  for (const auto& p : {p1, p32, p2, p3, pinf}) {
    const double rq = rayleigh_quotient(k, 3, u, p);
    CHECK(rq <= op_norm(k, 3, p).log_upper + 1e-12);
  }
  CHECK_THROWS_AS(rayleigh_quotient(k, 1, ScaledGridFunction::zero(g), p2), DomainError);
}

TEST_CASE("norm decreases with n for the unit kernel") {
  const GridSpec g(256);
  double prev = 1.0;
  for (int n = 1; n <= 6; ++n) {
    const double v = op_norm(unit(g), n, p3).log_lower;
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("scaling covariance of operator norms") {
  const GridSpec g(128);
  const auto k = unit(g);
  const auto a = operator_norm(k, p3);
  const auto b = operator_norm(k.scaled(std::log(5.0)), p3);
  CHECK(b.log_lower - a.log_lower == doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("method choice and errors") {
  const GridSpec g(64);
  const auto k = unit(g);
  NormOptions opt;
  opt.method = MethodChoice::svd_p2;
  CHECK_THROWS_AS(operator_norm(k, p3, opt), UsageError);
  opt.method = MethodChoice::exact_l1;
  CHECK_THROWS_AS(operator_norm(k, p2, opt), UsageError);
  opt.method = MethodChoice::power_iteration;
  CHECK_THROWS_AS(operator_norm(k, p1, opt), UsageError);
  CHECK(parse_method_choice("svd") == MethodChoice::svd_p2);
  CHECK_THROWS_AS(parse_method_choice("lanczos"), UsageError);
  NormOptions tight;
  tight.tol = 1e-15;
  tight.max_iterations = 2;
  try {
    operator_norm(discretize(Kernel{PowerExpKernel::make(1.0, 0.0, -3.0)}, g), p3, tight);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best().log_lower <= e.best().log_upper);
  }
  CHECK(std::isinf(operator_norm(ScaledGridFunction::zero(g), p3).log_upper));
}
