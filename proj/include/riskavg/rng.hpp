#pragma once

#include <cstdint>

namespace riskavg {

/// Counter-based 64-bit generator (keyed SplitMix64). Output i of stream s
/// is a pure function of (seed, s, i), so substreams can be replayed or
/// handed to different threads without coordination and skipping ahead is a
/// counter addition. Identical (seed, stream) always reproduce the same
/// sequence regardless of what other streams were consumed.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform draw strictly inside (0,1).
  double next_uniform();

  /// Standard normal via the inverse cdf; consumes exactly one uniform.
  double next_gaussian();

  /// Gamma(shape, rate) by the Marsaglia-Tsang squeeze/rejection scheme.
  /// Valid for shape > 1 only; smaller shapes throw std::domain_error.
  double next_gamma(double shape, double rate);

  /// Advances the counter without generating output.
  void skip(std::uint64_t n) { counter_ += n; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace riskavg
