#include "volterra/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "volterra/errors.hpp"
#include "volterra/special.hpp"

namespace volterra {

namespace {

void require_exponent(double r) {
  if (!(r > -1.0) || !std::isfinite(r)) throw DomainError("kernel exponent r must satisfy r > -1");
}

bool is_integer(double n) { return std::floor(n) == n; }

}  // namespace

PowerExpKernel PowerExpKernel::make(double c, double r, double mu) {
  if (c == 0.0 || !std::isfinite(c)) throw DomainError("power-exponential coefficient must be finite and nonzero");
  PowerExpKernel k{c > 0 ? 1 : -1, std::log(std::abs(c)), r, mu};
  k.validate();
  return k;
}

double PowerExpKernel::coefficient() const { return sign * std::exp(log_c); }

double PowerExpKernel::operator()(double t) const {
  return sign * std::exp(log_c + r * std::log(t) + mu * t);
}

void PowerExpKernel::validate() const {
  require_exponent(r);
  if (sign != 1 && sign != -1) throw DomainError("power-exponential sign must be +1 or -1");
  if (!std::isfinite(log_c) || !std::isfinite(mu)) throw DomainError("power-exponential fields must be finite");
}

PowerExpKernel conv_power_closed_form(const PowerExpKernel& k, double n) {
  k.validate();
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("convolution power needs n > 0");
  if (n == 1.0) return k;
  const bool integral = is_integer(n);
  if (!integral && k.sign < 0) throw DomainError("non-integer convolution power of a negative kernel");
  const double a = k.r + 1.0;
  PowerExpKernel out;
  out.r = a * n - 1.0;
  out.mu = k.mu;
  out.log_c = n * (k.log_c + log_gamma(a)) - log_gamma(a * n);
  out.sign = (integral && k.sign < 0 && std::fmod(n, 2.0) != 0.0) ? -1 : 1;
  return out;
}

PowerExpKernel convolve_closed_form(const PowerExpKernel& a, const PowerExpKernel& b) {
  a.validate();
  b.validate();
  if (a.mu != b.mu) throw DomainError("closed-form convolution needs equal rates");
  // t^{ra} * t^{rb} = B(ra+1, rb+1) t^{ra+rb+1}; e^{mu t} factors out.
  PowerExpKernel out;
  out.sign = a.sign * b.sign;
  out.r = a.r + b.r + 1.0;
  out.mu = a.mu;
  out.log_c = a.log_c + b.log_c + log_gamma(a.r + 1.0) + log_gamma(b.r + 1.0) - log_gamma(a.r + b.r + 2.0);
  return out;
}

SmoothFactorKernel::SmoothFactorKernel(double r, Factor factor, double f0, double f1)
    : r_(r), factor_(std::move(factor)), f0_(f0), f1_(f1) {
  require_exponent(r_);
}

SmoothFactorKernel SmoothFactorKernel::polynomial(double r, std::vector<double> coeffs) {
  if (coeffs.empty()) throw UsageError("polynomial factor needs at least one coefficient");
  const double f0 = coeffs[0];
  const double f1 = coeffs.size() > 1 ? coeffs[1] : 0.0;
  return SmoothFactorKernel(r, Polynomial{std::move(coeffs)}, f0, f1);
}

SmoothFactorKernel SmoothFactorKernel::table(double r, std::vector<double> values) {
  if (values.size() < 2) throw UsageError("table factor needs at least two node values");
  const double f0 = values[0];
  const double f1 = (values[1] - values[0]) * static_cast<double>(values.size() - 1);
  return SmoothFactorKernel(r, Table{std::move(values)}, f0, f1);
}

SmoothFactorKernel SmoothFactorKernel::exponential(double r, double c, double mu) {
  return SmoothFactorKernel(r, Exponential{c, mu}, c, c * mu);
}

SmoothFactorKernel SmoothFactorKernel::from_power_exp(const PowerExpKernel& k) {
  k.validate();
  return exponential(k.r, k.coefficient(), k.mu);
}

double SmoothFactorKernel::f(double t) const {
  struct Visitor {
    double t;
    double operator()(const Polynomial& p) const {
      double acc = 0.0;
      for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * t + *it;
      return acc;
    }
    double operator()(const Table& tab) const {
      const std::size_t segments = tab.values.size() - 1;
      const double x = std::clamp(t, 0.0, 1.0) * static_cast<double>(segments);
      const std::size_t i = std::min(static_cast<std::size_t>(x), segments - 1);
      const double w = x - static_cast<double>(i);
      return (1.0 - w) * tab.values[i] + w * tab.values[i + 1];
    }
    double operator()(const Exponential& e) const { return e.c * std::exp(e.mu * t); }
  };
  return std::visit(Visitor{t}, factor_);
}

double SmoothFactorKernel::operator()(double t) const { return std::pow(t, r_) * f(t); }

PowerExpKernel tangent_kernel(const SmoothFactorKernel& k) {
  if (k.f0() == 0.0) throw DomainError("tangent kernel needs f(0) != 0");
  return PowerExpKernel::make(k.f0(), k.r(), k.f1() / k.f0());
}

double kernel_exponent(const Kernel& k) {
  return std::visit([](const auto& kk) {
    if constexpr (std::is_same_v<std::decay_t<decltype(kk)>, PowerExpKernel>) {
      return kk.r;
    } else {
      return kk.r();
    }
  }, k);
}

}  // namespace volterra
