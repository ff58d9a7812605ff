#include "volterra/counter_rng.hpp"

#include <cmath>
#include <numbers>

namespace volterra {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream)
    : state_(splitmix64_mix(seed + kGolden) ^ splitmix64_mix(stream * kGolden + 0xD1B54A32D192ED03ULL)) {}

std::uint64_t CounterStream::next_u64() {
  state_ += kGolden;
  return splitmix64_mix(state_);
}

double CounterStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterStream::exponential(double rate) { return -std::log(uniform()) / rate; }

double CounterStream::gamma(double shape, double rate) {
  if (shape < 1.0) {
    const double boosted = gamma(shape + 1.0, 1.0);
    return boosted * std::pow(uniform(), 1.0 / shape) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

}  // namespace volterra
