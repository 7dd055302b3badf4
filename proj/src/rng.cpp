#include "riskavg/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "riskavg/normal.hpp"

namespace riskavg {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed + kGolden) ^ mix64(stream * 0xD2B74407B1CE6E93ull + 0x8BB84B93962EACC9ull)) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ + (++counter_) * kGolden); }

double CounterRng::next_uniform() {
  // 53-bit mantissa shifted into (0,1); the half-ulp offset excludes 0 and 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::next_gaussian() { return norm_quantile(next_uniform()); }

double CounterRng::next_gamma(double shape, double rate) {
  if (!(shape > 1.0)) throw std::domain_error("next_gamma: requires shape > 1");
  if (!(rate > 0.0)) throw std::domain_error("next_gamma: requires rate > 0");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = next_gaussian();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = next_uniform();
    double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

}  // namespace riskavg
