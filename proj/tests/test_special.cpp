#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "volterra/errors.hpp"
#include "volterra/holder.hpp"
#include "volterra/special.hpp"

using namespace volterra;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
}  // namespace

TEST_CASE("log_gamma matches std::lgamma away from the zeros") {
  for (double x = 1e-3; x < 1e4; x *= 1.37) {
    const double ref = std::lgamma(x);
    if (std::abs(ref) < 1e-2) continue;
    CHECK_MESSAGE(rel(log_gamma(x), ref) < 1e-13, "x = " << x);
  }
}

TEST_CASE("log_gamma near its zeros at 1 and 2") {
  // lgamma(1 + e) ~ -gamma e, lgamma(2 + e) ~ (1 - gamma) e
  const double euler = std::numbers::egamma;
  for (double e : {1e-6, -1e-6, 1e-9}) {
    CHECK(rel(log_gamma(1.0 + e), -euler * e + (std::numbers::pi * std::numbers::pi / 12.0) * e * e) < 1e-6);
    CHECK(rel(log_gamma(2.0 + e), (1.0 - euler) * e) < 1e-5);
  }
  CHECK(log_gamma(1.0) == 0.0);
  CHECK(log_gamma(2.0) == 0.0);
}

TEST_CASE("log_gamma exact points") {
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-15));
  CHECK(log_gamma(11.0) == doctest::Approx(std::log(3628800.0)).epsilon(1e-15));
  // 170! overflows no double when kept in log form
  CHECK(std::isfinite(log_gamma(1e6)));
}

TEST_CASE("log_gamma domain") {
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
  CHECK_THROWS_AS(log_gamma(std::nan("")), DomainError);
}

TEST_CASE("log_expm1_ratio") {
  CHECK(log_expm1_ratio(0.0) == 0.0);
  CHECK(log_expm1_ratio(1e-12) == doctest::Approx(0.5e-12).epsilon(1e-6));
  CHECK(log_expm1_ratio(2.0) == doctest::Approx(std::log(std::expm1(2.0) / 2.0)).epsilon(1e-14));
  CHECK(log_expm1_ratio(-3.0) == doctest::Approx(std::log(-std::expm1(-3.0) / 3.0)).epsilon(1e-14));
  CHECK(std::isfinite(log_expm1_ratio(2000.0)));
  CHECK(log_expm1_ratio(2000.0) == doctest::Approx(2000.0 - std::log(2000.0)).epsilon(1e-14));
}

TEST_CASE("log_gamma_p against closed forms") {
  // P(1, x) = 1 - e^{-x};  P(2, x) = e^{-x} sum_{k>=2} x^k/k! (no cancellation)
  for (double x : {1e-3, 0.1, 1.0, 5.0}) {
    CHECK(rel(log_gamma_p(1.0, x), std::log(-std::expm1(-x))) < 1e-12);
    double tail = 0.0, term = x * x / 2.0;
    for (int k = 2; term > 1e-20 * tail; ++k) {
      tail += term;
      term *= x / (k + 1);
    }
    CHECK(rel(log_gamma_p(2.0, x), std::log(tail) - x) < 1e-12);
  }
  // tail where P underflows: log P(n, 1) ~ -log n! - 1 + log(1 + 1/(n+1) + ...)
  const double lp = log_gamma_p(200.0, 1.0);
  CHECK(std::isfinite(lp));
  CHECK(lp == doctest::Approx(-std::lgamma(201.0) - 1.0 + std::log1p(1.0 / 201.0 + 1.0 / (201.0 * 202.0)))
                  .epsilon(1e-9));
  CHECK(log_gamma_p(3.0, 0.0) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(log_gamma_p(0.0, 1.0), DomainError);
}

TEST_CASE("log_add_exp") {
  CHECK(log_add_exp(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_add_exp(ninf, 3.0) == 3.0);
  CHECK(log_add_exp(ninf, ninf) == ninf);
}

TEST_CASE("holder exponents") {
  const auto p3 = HolderExponent::from_ratio(3, 1);
  CHECK(p3.p() == 3.0);
  CHECK(p3.q() == 1.5);
  CHECK(p3.conjugate().label() == "3/2");
  CHECK(HolderExponent::from_ratio(6, 4).label() == "3/2");
  CHECK(HolderExponent::from_double(2.0).is_two());
  CHECK(HolderExponent::one().conjugate().is_infinity());
  CHECK(HolderExponent::infinity().conjugate().is_one());
  CHECK_THROWS(HolderExponent::from_double(0.5));
  CHECK_THROWS(HolderExponent::from_ratio(1, 2));
}

TEST_CASE("C_p constant") {
  CHECK(cp_constant(HolderExponent::one()) == 1.0);
  CHECK(cp_constant(HolderExponent::infinity()) == 1.0);
  CHECK(cp_constant(HolderExponent::from_ratio(2, 1)) == doctest::Approx(0.5));
  // C_p is symmetric in (p, q)
  CHECK(cp_constant(HolderExponent::from_ratio(3, 1)) ==
        doctest::Approx(cp_constant(HolderExponent::from_ratio(3, 2))).epsilon(1e-15));
  // 3^{-1/3} (3/2)^{-2/3}
  CHECK(cp_constant(HolderExponent::from_ratio(3, 1)) ==
        doctest::Approx(std::pow(3.0, -1.0 / 3.0) * std::pow(1.5, -2.0 / 3.0)).epsilon(1e-15));
}
