#pragma once

#include <variant>
#include <vector>

namespace volterra {

/// k(t) = sign * e^{log_c} * t^r * e^{mu t} on (0, 1], r > -1.
///
/// The family is closed under convolution powers, so k^{*n} is carried
/// exactly (log-coefficient included) for any real n > 0.
struct PowerExpKernel {
  int sign = 1;
  double log_c = 0.0;
  double r = 0.0;
  double mu = 0.0;

  /// Builds from a plain coefficient c != 0.
  static PowerExpKernel make(double c, double r, double mu);

  double coefficient() const;
  double operator()(double t) const;
  /// Throws DomainError unless r > -1, sign is +-1 and log_c is finite.
  void validate() const;

  bool operator==(const PowerExpKernel&) const = default;
};

/// k^{*n}: exponent (r+1)n - 1, same rate, coefficient
/// (c Gamma(r+1))^n / Gamma((r+1)n). Non-integer n needs c > 0.
PowerExpKernel conv_power_closed_form(const PowerExpKernel& k, double n);

/// Symbolic a * b for kernels sharing the same rate mu (Beta integral).
PowerExpKernel convolve_closed_form(const PowerExpKernel& a, const PowerExpKernel& b);

/// k(t) = t^r f(t) with f(0), f'(0) carried explicitly.
///
/// f is one of: a polynomial sum a_j t^j; a table of values on uniform
/// nodes over [0, 1] with linear interpolation (f'(0) is the slope of the
/// first segment); or c e^{mu t}.
class SmoothFactorKernel {
 public:
  struct Polynomial {
    std::vector<double> coeffs;
  };
  struct Table {
    std::vector<double> values;
  };
  struct Exponential {
    double c;
    double mu;
  };
  using Factor = std::variant<Polynomial, Table, Exponential>;

  static SmoothFactorKernel polynomial(double r, std::vector<double> coeffs);
  static SmoothFactorKernel table(double r, std::vector<double> values);
  static SmoothFactorKernel exponential(double r, double c, double mu);
  static SmoothFactorKernel from_power_exp(const PowerExpKernel& k);

  double r() const noexcept { return r_; }
  double f0() const noexcept { return f0_; }
  double f1() const noexcept { return f1_; }
  const Factor& factor() const noexcept { return factor_; }

  /// f(t) for t in [0, 1].
  double f(double t) const;
  double operator()(double t) const;

 private:
  SmoothFactorKernel(double r, Factor factor, double f0, double f1);

  double r_;
  Factor factor_;
  double f0_;
  double f1_;
};

/// h(t) = f(0) t^r e^{(f'(0)/f(0)) t}; throws DomainError when f(0) = 0.
PowerExpKernel tangent_kernel(const SmoothFactorKernel& k);

using Kernel = std::variant<PowerExpKernel, SmoothFactorKernel>;

/// Exponent r of either representation.
double kernel_exponent(const Kernel& k);

}  // namespace volterra
