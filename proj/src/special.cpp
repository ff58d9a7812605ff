#include "volterra/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/special_functions/gamma.hpp>

#include "volterra/errors.hpp"

namespace volterra {

namespace {

constexpr int kZetaTerms = 40;

// zeta(k) - 1 for k = 2..kZetaTerms+1: direct sum to N-1 plus an
// Euler-Maclaurin tail at N = 16 through B_12 (truncation below 1e-18).
std::array<double, kZetaTerms> make_zeta_minus_one() {
  constexpr int n_cut = 16;
  constexpr std::array<double, 6> bernoulli = {1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,
                                               -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0};
  std::array<double, kZetaTerms> out{};
  for (int idx = 0; idx < kZetaTerms; ++idx) {
    const double s = idx + 2;
    double tail = std::pow(n_cut, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n_cut, -s);
    double rising = s;  // s (s+1) ... (s+2j-2)
    double factorial = 2.0;
    for (int j = 1; j <= 6; ++j) {
      tail += bernoulli[j - 1] / factorial * rising * std::pow(n_cut, -s - 2.0 * j + 1.0);
      rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
      factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    double head = 0.0;
    for (int k = n_cut - 1; k >= 2; --k) head += std::pow(k, -s);
    out[idx] = head + tail;
  }
  return out;
}

const std::array<double, kZetaTerms>& zeta_minus_one() {
  static const auto table = make_zeta_minus_one();
  return table;
}

// sum_{k>=2} (-1)^k (zeta(k)-1) z^k / k for |z| <= 1/2.
double zeta_series(double z) {
  const auto& zm1 = zeta_minus_one();
  double sum = 0.0;
  double zk = z * z;
  for (int idx = 0; idx < kZetaTerms; ++idx) {
    const int k = idx + 2;
    const double term = zm1[idx] * zk / k;
    sum += (k % 2 == 0) ? term : -term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    zk *= z;
  }
  return sum;
}

// Lanczos approximation, g = 607/128 with the 14-term series of
// Numerical Recipes (3rd ed., gammln); about 1e-15 relative for x > 2.
double lanczos_log_gamma(double x) {
  static constexpr std::array<double, 14> cof = {
      57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
      -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
      -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
      .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
      -.261908384015814087e-4, .368991826595316234e-5};
  double y = x;
  double tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (double c : cof) ser += c / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  if (std::isinf(x)) return x;
  constexpr double one_minus_euler = 1.0 - std::numbers::egamma;
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
  if (x <= 1.5) {
    const double z = x - 1.0;
    return -std::log1p(z) + one_minus_euler * z + zeta_series(z);
  }
  if (x <= 2.5) {
    // log Gamma(2+z) = log(1+z) + log Gamma(1+z); the log1p terms cancel.
    const double z = x - 2.0;
    return one_minus_euler * z + zeta_series(z);
  }
  return lanczos_log_gamma(x);
}

double log_expm1_ratio(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-4) return x * (0.5 + x * (1.0 / 24.0 - x * x / 2880.0));
  if (x > 0.0) return x + std::log(-std::expm1(-x) / x);
  return std::log(std::expm1(x) / x);
}

double log_gamma_p(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("log_gamma_p: need a > 0 and x >= 0");
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (x >= a + 1.0) return std::log1p(-boost::math::gamma_q(a, x));
  // P(a,x) = x^a e^{-x} / Gamma(a+1) * sum_k x^k / ((a+1)...(a+k)); all terms positive.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return a * std::log(x) - x - log_gamma(a + 1.0) + std::log(sum);
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace volterra
