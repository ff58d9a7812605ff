#pragma once

namespace volterra {

/// Natural log of the gamma function for x > 0.
///
/// Relative error stays below 1e-13 on [1e-3, 1e4], including the
/// neighbourhoods of x = 1 and x = 2 where log Gamma vanishes. Throws
/// DomainError for x <= 0 or NaN.
double log_gamma(double x);

/// log((e^x - 1) / x), continuous at x = 0 where it equals 0.
double log_expm1_ratio(double x);

/// Natural log of the regularized lower incomplete gamma function P(a, x).
/// Stays finite where P itself underflows. Requires a > 0, x >= 0; returns
/// -inf at x = 0.
double log_gamma_p(double a, double x);

/// log(e^a + e^b) without overflow.
double log_add_exp(double a, double b);

}  // namespace volterra
