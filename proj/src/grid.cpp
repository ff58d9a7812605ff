#include "volterra/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "volterra/errors.hpp"
#include "volterra/special.hpp"

namespace volterra {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_same_grid(const ScaledGridFunction& a, const ScaledGridFunction& b) {
  if (!(a.grid() == b.grid())) throw UsageError("grid functions live on different grids");
}

// log of the mean of t^r over cell j.
double log_power_cell_mean(double r, std::size_t j, double log_h) {
  const double a = r + 1.0;
  if (j == 0) return r * log_h - std::log(a);
  const double jd = static_cast<double>(j);
  // ((j+1)^a - j^a) h^r / a  =  j^a expm1(a log1p(1/j)) h^r / a
  return r * log_h + a * std::log(jd) + std::log(std::expm1(a * std::log1p(1.0 / jd))) - std::log(a);
}

ScaledGridFunction from_logs(GridSpec grid, const std::vector<double>& logs, const std::vector<double>& signs) {
  const double top = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(top)) return ScaledGridFunction::zero(grid);
  std::vector<double> values(logs.size());
  for (std::size_t j = 0; j < logs.size(); ++j) values[j] = signs[j] * std::exp(logs[j] - top);
  return ScaledGridFunction(grid, std::move(values), top);
}

}  // namespace

GridSpec::GridSpec(std::size_t cells) : cells_(cells), step_(1.0 / static_cast<double>(cells)) {
  if (cells < 8 || !std::has_single_bit(cells)) throw UsageError("grid cell count must be a power of two >= 8");
}

ScaledGridFunction::ScaledGridFunction(GridSpec grid, std::vector<double> values, double log_scale)
    : grid_(grid), values_(std::move(values)), log_scale_(log_scale) {
  if (values_.size() != grid_.cells()) throw UsageError("grid function length does not match its grid");
  for (double v : values_) {
    if (!std::isfinite(v)) throw UsageError("grid function mantissas must be finite");
  }
  if (std::isnan(log_scale_) || log_scale_ == std::numeric_limits<double>::infinity()) {
    throw UsageError("grid function log-scale must be finite or -inf");
  }
  normalize();
}

ScaledGridFunction ScaledGridFunction::zero(GridSpec grid) {
  return ScaledGridFunction(grid, std::vector<double>(grid.cells(), 0.0), kNegInf);
}

void ScaledGridFunction::normalize() {
  double top = 0.0;
  for (double v : values_) top = std::max(top, std::abs(v));
  if (top == 0.0 || log_scale_ == kNegInf) {
    std::fill(values_.begin(), values_.end(), 0.0);
    log_scale_ = kNegInf;
    return;
  }
  int exponent = 0;
  std::frexp(top, &exponent);
  if (exponent == 0) return;
  for (double& v : values_) v = std::ldexp(v, -exponent);
  log_scale_ += exponent * std::numbers::ln2;
}

double ScaledGridFunction::value(std::size_t j) const {
  if (log_scale_ == kNegInf) return 0.0;
  return values_[j] * std::exp(log_scale_);
}

bool ScaledGridFunction::is_zero() const noexcept { return log_scale_ == kNegInf; }

bool ScaledGridFunction::is_nonnegative() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
}

ScaledGridFunction ScaledGridFunction::scaled(double log_factor) const {
  ScaledGridFunction out = *this;
  if (!out.is_zero()) out.log_scale_ += log_factor;
  return out;
}

ScaledGridFunction ScaledGridFunction::negated() const {
  ScaledGridFunction out = *this;
  for (double& v : out.values_) v = -v;
  return out;
}

ScaledGridFunction discretize(const Kernel& k, GridSpec grid) {
  const std::size_t m = grid.cells();
  const double log_h = std::log(grid.step());
  std::vector<double> logs(m);
  std::vector<double> signs(m, 1.0);
  if (const auto* pe = std::get_if<PowerExpKernel>(&k)) {
    pe->validate();
    for (std::size_t j = 0; j < m; ++j) {
      logs[j] = pe->log_c + log_power_cell_mean(pe->r, j, log_h) + pe->mu * grid.midpoint(j);
      signs[j] = pe->sign;
    }
    return from_logs(grid, logs, signs);
  }
  const auto& sf = std::get<SmoothFactorKernel>(k);
  for (std::size_t j = 0; j < m; ++j) {
    const double fv = sf.f(grid.midpoint(j));
    logs[j] = fv == 0.0 ? kNegInf : log_power_cell_mean(sf.r(), j, log_h) + std::log(std::abs(fv));
    signs[j] = fv < 0.0 ? -1.0 : 1.0;
  }
  return from_logs(grid, logs, signs);
}

ScaledGridFunction exponential_cell_means(double rate, GridSpec grid) {
  const std::size_t m = grid.cells();
  const double h = grid.step();
  const double cell_factor = log_expm1_ratio(rate * h);
  std::vector<double> logs(m);
  for (std::size_t j = 0; j < m; ++j) logs[j] = rate * static_cast<double>(j) * h + cell_factor;
  return from_logs(grid, logs, std::vector<double>(m, 1.0));
}

ScaledGridFunction convolve(const ScaledGridFunction& a, const ScaledGridFunction& b) {
  require_same_grid(a, b);
  const GridSpec grid = a.grid();
  if (a.is_zero() || b.is_zero()) return ScaledGridFunction::zero(grid);
  const std::size_t m = grid.cells();
  const auto av = a.values();
  const auto bv = b.values();
  std::vector<double> out(m);
  double prev = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= j; ++i) acc += av[i] * bv[j - i];
    out[j] = 0.5 * (acc + prev);
    prev = acc;
  }
  return ScaledGridFunction(grid, std::move(out), a.log_scale() + b.log_scale() + std::log(grid.step()));
}

ScaledGridFunction conv_power_numeric(const ScaledGridFunction& k, int n) {
  if (n < 1) throw UsageError("numeric convolution power needs n >= 1");
  const auto bits = static_cast<unsigned>(n);
  int top = std::bit_width(bits) - 1;
  ScaledGridFunction result = k;
  for (int bit = top - 1; bit >= 0; --bit) {
    result = convolve(result, result);
    if ((bits >> bit) & 1u) result = convolve(result, k);
  }
  return result;
}

double restricted_l1(const ScaledGridFunction& f, double upper) {
  if (!(upper > 0.0 && upper <= 1.0)) throw DomainError("restricted_l1 upper limit must lie in (0, 1]");
  if (f.is_zero()) return kNegInf;
  const double h = f.grid().step();
  const auto v = f.values();
  const double cells = upper / h;
  const auto whole = std::min(static_cast<std::size_t>(cells), v.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < whole; ++j) acc += std::abs(v[j]);
  if (whole < v.size()) acc += (cells - static_cast<double>(whole)) * std::abs(v[whole]);
  if (acc == 0.0) return kNegInf;
  return std::log(acc * h) + f.log_scale();
}

ScaledGridFunction difference(const ScaledGridFunction& a, const ScaledGridFunction& b) {
  require_same_grid(a, b);
  if (b.is_zero()) return a;
  if (a.is_zero()) return b.negated();
  const double common = std::max(a.log_scale(), b.log_scale());
  const double wa = std::exp(a.log_scale() - common);
  const double wb = std::exp(b.log_scale() - common);
  std::vector<double> out(a.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = a.values()[j] * wa - b.values()[j] * wb;
  return ScaledGridFunction(a.grid(), std::move(out), common);
}

void write_csv(std::ostream& os, const ScaledGridFunction& f) {
  os << "# value = mantissa * exp(log_scale); log_scale is a natural logarithm\n";
  os << "t,mantissa,log_scale\n";
  char buf[96];
  for (std::size_t j = 0; j < f.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.grid().midpoint(j), f.values()[j], f.log_scale());
    os << buf;
  }
}

}  // namespace volterra
