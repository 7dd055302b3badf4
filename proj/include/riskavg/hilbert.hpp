#pragma once

#include <cstdint>

#include "riskavg/kernel_ball.hpp"

namespace riskavg::hilbert {

// Finite-dimensional slice of the Hilbert-space Gaussian experiment:
// base measure N(0, I_n), center X = e_1, kernel phi(t) = e^{-t^2}.
// Completing the square tilts the weighted base to N((2/3) e_1, (1/3) I_n);
// with V = u - e_1 ~ N(-e_1/3, I_n/3) the ball condition ||V|| <= r becomes
// a noncentral chi-squared event with argument 3 r^2 and noncentrality 1/3.
struct HilbertExperiment {
  int dim = 1;
  double radius = 1.0;
  void validate() const;
};

// Tilt constants fixed by the phi(t) = e^{-t^2}, unit-eigenvalue setup.
struct TiltedGaussian {
  static constexpr double mean_factor = 2.0 / 3.0;   // tilted mean is (2/3) X
  static constexpr double variance = 1.0 / 3.0;      // isotropic tilted variance
  static constexpr double offset_m1 = -1.0 / 3.0;    // mean of V_1
  static constexpr double noncentrality = 1.0 / 3.0; // ||m||^2 / sigma^2
};

/// E[V_1 | ||V|| <= r] = m_1 F_{n+2}(3r^2; 1/3) / F_n(3r^2; 1/3); negative
/// for all (n, r) and vanishing like 1/n as the dimension grows.
double conditional_mean_v1(int n, double r);

/// Finite-n averaging value for the linear risk rho(Z) = -Z_1:
/// -1 - conditional_mean_v1(n, r). Tends to -1 as n grows at fixed r and to
/// -2/3 as r grows at fixed n.
double rho_linear_finite_n(int n, double r);

/// Monte Carlo route to the same quantity: exact conditioning by sampling
/// the tilted Gaussian, retaining draws in the ball around e_1 and averaging
/// -u_1 with uniform weights. The acceptance rate estimates F_n(3r^2; 1/3).
McEstimate rho_linear_mc(int n, double r, std::uint64_t n_draws, std::uint64_t seed);

/// Untilted cross-check estimator: draws from N(0, I_n) weighted by the
/// e^{-t^2} kernel inside the same ball. Estimates the same ratio of
/// Gaussian integrals; acceptance here follows F_n(r^2; 1) instead.
McEstimate rho_linear_mc_untilted(int n, double r, std::uint64_t n_draws, std::uint64_t seed);

/// Unconditional second moment of V_1: Var + mean^2 = 1/3 + 1/9 = 4/9.
double unconditional_second_moment_v1();

/// Quadratic risk rho(Z) = -Z_1^2 at finite n: the mean term is closed form,
/// the conditional second moment comes from rejection under the tilt, and
/// assembled = -1 - 2 * mean_term - second_moment_term.
struct QuadraticComponents {
  double mean_term;
  double second_moment_term;
  double second_moment_se;
  double assembled;
  double acceptance_rate;
};
QuadraticComponents rho_quadratic_components(int n, double r, std::uint64_t n_draws,
                                             std::uint64_t seed);

/// Large-n assembly with the limiting (unconditional) second moment 4/9:
/// -1 - 2 * conditional_mean_v1(n, r) - 4/9 -> -13/9.
double quadratic_limit_assembly(int n, double r);

/// The two iterated limits evaluated at finite proxies. For the linear risk
/// the inner n -> infinity limit is -1 at any fixed r and the inner
/// r -> infinity limit is -2/3 at any fixed n; the quadratic analogues are
/// -13/9 and the unconditional tilted value E[-u_1^2] = -7/9.
struct NoncommutingLimits {
  double linear_n_inner;     // lim_n then r: proxy rho_linear_finite_n(n_large, r_moderate)
  double linear_r_inner;     // lim_r then n: proxy rho_linear_finite_n(n_small, r_large)
  double quadratic_n_inner;  // quadratic_limit_assembly(n_large, r_moderate)
  double quadratic_r_inner;  // -E[u_1^2] under the tilt, no ball
};
NoncommutingLimits noncommuting_limits_table(int n_large = 100000, double r_moderate = 1.0,
                                             int n_small = 5, double r_large = 1000.0);

/// BaseSampler drawing from the tilted N((2/3) e_1, (1/3) I_n).
BaseSampler tilted_sampler(int n);

/// BaseSampler drawing from the standard N(0, I_n).
BaseSampler standard_sampler(int n);

}  // namespace riskavg::hilbert
