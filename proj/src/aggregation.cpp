#include "riskavg/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "riskavg/normal.hpp"
#include "riskavg/quadrature.hpp"

namespace riskavg {

namespace {

// Trapezoid over the grid, extended to the full unit interval by holding the
// integrand constant beyond the first and last nodes.
double grid_integral(std::span<const double> u, std::span<const double> f) {
  double acc = f.front() * u.front() + f.back() * (1.0 - u.back());
  for (std::size_t i = 0; i + 1 < u.size(); ++i)
    acc += 0.5 * (f[i] + f[i + 1]) * (u[i + 1] - u[i]);
  return acc;
}

}  // namespace

void LawMixture::validate() const {
  if (components.empty()) throw std::domain_error("LawMixture: needs at least one component");
  if (components.size() != weights.size())
    throw std::domain_error("LawMixture: component/weight count mismatch");
  double s = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::domain_error("LawMixture: negative weight");
    s += w;
  }
  if (std::fabs(s - 1.0) > 1e-12) throw std::domain_error("LawMixture: weights must sum to 1");
  for (const GaussianLaw& c : components) c.validate();
}

double mixture_cdf(const LawMixture& m, double x) {
  m.validate();
  double acc = 0.0;
  for (std::size_t i = 0; i < m.components.size(); ++i)
    acc += m.weights[i] * norm_cdf((x - m.components[i].mean) / m.components[i].stddev);
  return acc;
}

double mixture_quantile(const LawMixture& m, double u) {
  m.validate();
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("mixture_quantile: u outside (0,1)");
  const double zq = norm_quantile(u);
  // The mixture quantile is bracketed by the extreme component quantiles.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const GaussianLaw& c : m.components) {
    lo = std::min(lo, c.mean + c.stddev * zq);
    hi = std::max(hi, c.mean + c.stddev * zq);
  }
  if (lo == hi) return lo;
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mixture_cdf(m, mid) >= u)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double es_mixture(const LawMixture& m, EsLevel level) {
  level.validate();
  const double p = 1.0 - level.a;
  double tail = tanh_sinh([&](double u) { return mixture_quantile(m, u); }, 0.0, p, 1e-10);
  return -tail / p;
}

double entropic_mixture(const LawMixture& m, double gamma) {
  m.validate();
  if (!(gamma > 0.0)) throw std::domain_error("entropic_mixture: gamma must be positive");
  // E[e^{-gamma X}] = sum w_i exp(-gamma mu_i + gamma^2 sigma_i^2 / 2)
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> expo(m.components.size());
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    const GaussianLaw& c = m.components[i];
    expo[i] = -gamma * c.mean + 0.5 * gamma * gamma * c.stddev * c.stddev;
    mx = std::max(mx, expo[i]);
  }
  double s = 0.0;
  for (std::size_t i = 0; i < expo.size(); ++i) s += m.weights[i] * std::exp(expo[i] - mx);
  return (mx + std::log(s)) / gamma;
}

QuantileAggregate quantile_aggregate(std::span<const GaussianLaw> laws,
                                     std::span<const double> weights,
                                     std::span<const double> ugrid) {
  if (laws.empty() || laws.size() != weights.size())
    throw std::domain_error("quantile_aggregate: bad components");
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  if (std::fabs(wsum - 1.0) > 1e-12)
    throw std::domain_error("quantile_aggregate: weights must be normalized");

  QuantileAggregate agg;
  agg.u.assign(ugrid.begin(), ugrid.end());
  agg.q.reserve(ugrid.size());
  double prev = -std::numeric_limits<double>::infinity();
  for (double u : ugrid) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile_aggregate: grid outside (0,1)");
    double zq = norm_quantile(u);
    double q = 0.0;
    for (std::size_t i = 0; i < laws.size(); ++i)
      q += weights[i] * (laws[i].mean + laws[i].stddev * zq);
    if (q < prev) throw std::runtime_error("quantile_aggregate: non-monotone output");
    prev = q;
    agg.q.push_back(q);
  }
  return agg;
}

std::vector<double> chebyshev_ugrid(int n) {
  if (n < 2) throw std::domain_error("chebyshev_ugrid: need at least 2 points");
  std::vector<double> u(n);
  constexpr double kPi = 3.1415926535897932384626433832795029;
  for (int i = 0; i < n; ++i) u[i] = 0.5 * (1.0 - std::cos(kPi * (i + 0.5) / n));
  return u;
}

double spectral_risk_tabulated(const QuantileAggregate& agg, const SpectralWeight& w) {
  if (agg.u.size() < 2 || agg.u.size() != agg.q.size())
    throw std::domain_error("spectral_risk_tabulated: bad grid");
  std::vector<double> f(agg.u.size());
  for (std::size_t i = 0; i < agg.u.size(); ++i) f[i] = agg.q[i] * w(agg.u[i]);
  return -grid_integral(agg.u, f);
}

CantelliEnvelope cantelli_envelope(double mean, double stddev, double r, double u) {
  if (!(stddev >= 0.0)) throw std::domain_error("cantelli_envelope: stddev must be >= 0");
  if (!(r >= 0.0)) throw std::domain_error("cantelli_envelope: r must be >= 0");
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("cantelli_envelope: u outside (0,1)");
  const double s = stddev + 2.0 * r;
  CantelliEnvelope env;
  env.lower = mean - s * std::sqrt((1.0 - u) / u);
  env.upper = mean + s * std::sqrt(u / (1.0 - u));
  env.midpoint = mean + s * (2.0 * u - 1.0) / (2.0 * std::sqrt(u * (1.0 - u)));
  return env;
}

void OneDirectionFamily::validate() const {
  if (u.size() < 2 || u.size() != qx.size() || u.size() != h.size())
    throw std::domain_error("OneDirectionFamily: grid size mismatch");
  if (!(radius >= 0.0)) throw std::domain_error("OneDirectionFamily: radius must be >= 0");
  if (!(p >= 1.0)) throw std::domain_error("OneDirectionFamily: p must be >= 1");
  if (!std::is_sorted(u.begin(), u.end()))
    throw std::domain_error("OneDirectionFamily: u-grid must be sorted");

  // h non-decreasing and unit L^p norm on the grid
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    if (h[i + 1] < h[i] - 1e-12)
      throw std::domain_error("OneDirectionFamily: h must be non-decreasing");
  }
  std::vector<double> habs(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) habs[i] = std::pow(std::fabs(h[i]), p);
  double norm_p = grid_integral(u, habs);
  if (std::fabs(std::pow(norm_p, 1.0 / p) - 1.0) > 1e-10)
    throw std::domain_error("OneDirectionFamily: h must have unit L^p norm");

  // q_X + a h must stay a quantile function for every |a| <= radius; by
  // linearity it suffices to check the two extremes.
  for (double a : {radius, -radius}) {
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      if (qx[i + 1] + a * h[i + 1] < qx[i] + a * h[i] - 1e-9)
        throw std::domain_error("OneDirectionFamily: q_X + a h not monotone inside the ball");
    }
  }
  for (const auto& [a, mass] : atoms) {
    (void)a;
    if (!(mass >= 0.0)) throw std::domain_error("OneDirectionFamily: negative atom mass");
  }
}

OneDirectionShift one_direction_shift(const OneDirectionFamily& fam, const KernelSpec& kernel,
                                      const SpectralWeight& spectral) {
  fam.validate();

  double wsum = 0.0;
  double asum = 0.0;
  for (const auto& [a, mass] : fam.atoms) {
    if (std::fabs(a) > fam.radius || mass == 0.0) continue;
    double w = mass * kernel_weight(kernel, std::fabs(a));
    wsum += w;
    asum += w * a;
  }
  if (wsum < kWeightSumFloor) throw EmptyBallError(0.0);

  OneDirectionShift out;
  out.m_xr = asum / wsum;

  // grid integrals against the spectral weight
  const std::size_t n = fam.u.size();
  std::vector<double> fq(n), fh(n), fha(n);
  for (std::size_t i = 0; i < n; ++i) {
    double phi = spectral(fam.u[i]);
    fq[i] = fam.qx[i] * phi;
    fh[i] = fam.h[i] * phi;
    fha[i] = std::fabs(fam.h[i]) * phi;
  }
  out.shifted_risk = -grid_integral(fam.u, fq) - out.m_xr * grid_integral(fam.u, fh);
  out.bound = fam.radius * grid_integral(fam.u, fha);
  return out;
}

}  // namespace riskavg
