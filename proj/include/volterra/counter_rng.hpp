#pragma once

#include <cstdint>

namespace volterra {

/// SplitMix64 stream keyed by (seed, stream id).
///
/// Every Monte Carlo trial owns the stream (seed, trial index), so results
/// do not depend on how trials are split across threads. Draws within a
/// stream are successive SplitMix64 outputs.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal by Box-Muller (one draw per call, no caching).
  double normal();
  double exponential(double rate);
  /// Marsaglia-Tsang for shape >= 1; shape < 1 via Gamma(shape+1) U^{1/shape}.
  double gamma(double shape, double rate);

 private:
  std::uint64_t state_;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace volterra
