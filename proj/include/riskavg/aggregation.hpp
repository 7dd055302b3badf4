#pragma once

#include <span>
#include <vector>

#include "riskavg/kernel_ball.hpp"
#include "riskavg/risk.hpp"

namespace riskavg {

/// Finite Gaussian mixture standing in for the distribution-level aggregate:
/// its cdf is the weighted average of the component cdfs.
struct LawMixture {
  std::vector<GaussianLaw> components;
  std::vector<double> weights;
  void validate() const;  // weights normalized within 1e-12, count >= 1
};

/// Weighted average of component cdfs at x; right-continuous and
/// non-decreasing by construction.
double mixture_cdf(const LawMixture& m, double x);

/// Generalized inverse inf{x : F(x) >= u}, located by bisection to 1e-10.
double mixture_quantile(const LawMixture& m, double u);

/// ES of the mixture law by quadrature of its quantile over the tail.
double es_mixture(const LawMixture& m, EsLevel level);

/// Entropic risk of the mixture law (mixture mgf in closed form).
double entropic_mixture(const LawMixture& m, double gamma);

/// Pointwise weighted average of component quantiles on a u-grid.
struct QuantileAggregate {
  std::vector<double> u;
  std::vector<double> q;
};
QuantileAggregate quantile_aggregate(std::span<const GaussianLaw> laws,
                                     std::span<const double> weights,
                                     std::span<const double> ugrid);

/// Chebyshev-spaced points on (0,1), clustered at both endpoints.
std::vector<double> chebyshev_ugrid(int n = 2048);

/// Spectral risk -integral q(u) phi(u) du of a tabulated quantile,
/// trapezoidal on the aggregate's own grid.
double spectral_risk_tabulated(const QuantileAggregate& agg, const SpectralWeight& w);

/// Cantelli bounds on the quantile of any L2 payoff whose mean and stddev
/// are known, widened by 2r for ball perturbations, plus the minimax
/// midpoint estimate.
struct CantelliEnvelope {
  double lower;
  double upper;
  double midpoint;
};
CantelliEnvelope cantelli_envelope(double mean, double stddev, double r, double u);

/// One-direction quantile family: q_{Z_a}(u) = q_X(u) + a h(u) with h
/// non-decreasing and unit L^p norm, perturbation sizes a carried by a
/// finite atomic measure on [-radius, radius].
struct OneDirectionFamily {
  std::vector<double> u;   // grid on (0,1)
  std::vector<double> qx;  // base quantile on the grid
  std::vector<double> h;   // direction on the grid
  double radius = 0.0;
  std::vector<std::pair<double, double>> atoms;  // (a_j, mass_j)
  double p = 2.0;                                // L^p norm used for h
  void validate() const;
};

/// Kernel-weighted mean shift m_{X,r} along the family, the resulting
/// spectral risk of the aggregated quantile, and the bound
/// r * integral |h| phi. |m_{X,r}| <= r always.
struct OneDirectionShift {
  double m_xr;
  double shifted_risk;
  double bound;
};
OneDirectionShift one_direction_shift(const OneDirectionFamily& fam, const KernelSpec& kernel,
                                      const SpectralWeight& spectral);

}  // namespace riskavg
