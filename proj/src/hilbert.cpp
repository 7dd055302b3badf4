#include "riskavg/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskavg/chisq.hpp"

namespace riskavg::hilbert {

void HilbertExperiment::validate() const {
  if (dim < 1) throw std::domain_error("HilbertExperiment: dim must be >= 1");
  if (!(radius > 0.0)) throw std::domain_error("HilbertExperiment: radius must be positive");
}

double conditional_mean_v1(int n, double r) {
  HilbertExperiment{n, r}.validate();
  const double x = 3.0 * r * r;  // r^2 / sigma^2
  double ratio = chisq::cdf_ratio(n, TiltedGaussian::noncentrality, x);
  return TiltedGaussian::offset_m1 * ratio;
}

double rho_linear_finite_n(int n, double r) { return -1.0 - conditional_mean_v1(n, r); }

namespace {

Point center_e1(int n) {
  Point x(static_cast<std::size_t>(n), 0.0);
  x[0] = 1.0;
  return x;
}

}  // namespace

BaseSampler tilted_sampler(int n) {
  const double sigma = std::sqrt(TiltedGaussian::variance);
  return {[n, sigma](CounterRng& rng) {
            Point z(static_cast<std::size_t>(n));
            z[0] = TiltedGaussian::mean_factor + sigma * rng.next_gaussian();
            for (int i = 1; i < n; ++i) z[i] = sigma * rng.next_gaussian();
            return z;
          },
          false};
}

BaseSampler standard_sampler(int n) {
  return {[n](CounterRng& rng) {
            Point z(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) z[i] = rng.next_gaussian();
            return z;
          },
          true};
}

McEstimate rho_linear_mc(int n, double r, std::uint64_t n_draws, std::uint64_t seed) {
  HilbertExperiment{n, r}.validate();
  BallSpec ball{euclidean_metric(), center_e1(n), r};
  // The kernel is absorbed into the tilt, so retained draws carry equal weight.
  return avg_risk_mc(tilted_sampler(n), ball, KernelSpec::uniform(), coordinate_risk(0),
                     n_draws, seed);
}

McEstimate rho_linear_mc_untilted(int n, double r, std::uint64_t n_draws, std::uint64_t seed) {
  HilbertExperiment{n, r}.validate();
  BallSpec ball{euclidean_metric(), center_e1(n), r};
  return avg_risk_mc(standard_sampler(n), ball, KernelSpec::gaussian_exp(1.0), coordinate_risk(0),
                     n_draws, seed);
}

double unconditional_second_moment_v1() {
  return TiltedGaussian::variance + TiltedGaussian::offset_m1 * TiltedGaussian::offset_m1;
}

QuadraticComponents rho_quadratic_components(int n, double r, std::uint64_t n_draws,
                                             std::uint64_t seed) {
  HilbertExperiment{n, r}.validate();
  if (n_draws == 0) throw std::domain_error("rho_quadratic_components: n_draws must be positive");

  QuadraticComponents out{};
  out.mean_term = conditional_mean_v1(n, r);

  // E[(V_1)^2 | ||V|| <= r] by rejection under the tilt (exact conditioning).
  const double sigma = std::sqrt(TiltedGaussian::variance);
  const double r2 = r * r;
  double s1 = 0.0, s2 = 0.0;
  std::uint64_t retained = 0;
  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t chunks = (n_draws + kChunk - 1) / kChunk;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    CounterRng rng(seed, c);
    const std::uint64_t hi = std::min(n_draws, (c + 1) * kChunk);
    for (std::uint64_t i = c * kChunk; i < hi; ++i) {
      double v1 = TiltedGaussian::offset_m1 + sigma * rng.next_gaussian();
      double norm2 = v1 * v1;
      for (int d = 1; d < n; ++d) {
        double vd = sigma * rng.next_gaussian();
        norm2 += vd * vd;
      }
      if (norm2 > r2) continue;
      ++retained;
      double q = v1 * v1;
      s1 += q;
      s2 += q * q;
    }
  }
  out.acceptance_rate = static_cast<double>(retained) / static_cast<double>(n_draws);
  if (retained == 0) throw EmptyBallError(0.0);
  out.second_moment_term = s1 / static_cast<double>(retained);
  double var = s2 / static_cast<double>(retained) - out.second_moment_term * out.second_moment_term;
  out.second_moment_se = std::sqrt(std::max(var, 0.0) / static_cast<double>(retained));
  out.assembled = -1.0 - 2.0 * out.mean_term - out.second_moment_term;
  return out;
}

double quadratic_limit_assembly(int n, double r) {
  return -1.0 - 2.0 * conditional_mean_v1(n, r) - unconditional_second_moment_v1();
}

NoncommutingLimits noncommuting_limits_table(int n_large, double r_moderate, int n_small,
                                             double r_large) {
  NoncommutingLimits t{};
  t.linear_n_inner = rho_linear_finite_n(n_large, r_moderate);
  t.linear_r_inner = rho_linear_finite_n(n_small, r_large);
  t.quadratic_n_inner = quadratic_limit_assembly(n_large, r_moderate);
  // Vacuous conditioning at fixed n and huge r: E[-u_1^2] under the tilt,
  // u_1 ~ N(2/3, 1/3), so the value is -(1/3 + 4/9) = -7/9.
  const double mean_u1 = TiltedGaussian::mean_factor;
  t.quadratic_r_inner = -(TiltedGaussian::variance + mean_u1 * mean_u1);
  return t;
}

}  // namespace riskavg::hilbert
