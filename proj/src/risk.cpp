#include "riskavg/risk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riskavg/normal.hpp"
#include "riskavg/quadrature.hpp"

namespace riskavg {

void GaussianLaw::validate() const {
  if (!std::isfinite(mean) || !std::isfinite(stddev))
    throw std::domain_error("GaussianLaw: fields must be finite");
  if (!(stddev > 0.0)) throw std::domain_error("GaussianLaw: stddev must be positive");
}

void EsLevel::validate() const {
  if (!(a > 0.0 && a < 1.0)) throw std::domain_error("EsLevel: a must lie in (0,1)");
}

double es_tail_constant(EsLevel level) {
  level.validate();
  return norm_pdf(norm_quantile(level.a)) / (1.0 - level.a);
}

double es_gaussian(const GaussianLaw& law, EsLevel level) {
  law.validate();
  return -law.mean + law.stddev * es_tail_constant(level);
}

double es_empirical(std::span<const double> sample, EsLevel level) {
  level.validate();
  if (sample.empty()) throw std::domain_error("es_empirical: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double tail = (1.0 - level.a) * n;  // in (0, n)
  std::size_t k = static_cast<std::size_t>(tail);
  if (k >= sorted.size()) k = sorted.size() - 1;
  double frac = tail - static_cast<double>(k);
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) acc += sorted[i];
  if (frac > 0.0) acc += frac * sorted[k];
  return -acc / tail;
}

double entropic_gaussian(const GaussianLaw& law, double gamma) {
  law.validate();
  if (!(gamma > 0.0)) throw std::domain_error("entropic_gaussian: gamma must be positive");
  return -law.mean + 0.5 * gamma * law.stddev * law.stddev;
}

namespace {
constexpr int kSegmentLevel = 7;  // ~1000 tanh-sinh nodes per segment
}

SpectralWeight SpectralWeight::from_function(std::function<double(double)> phi,
                                             std::vector<double> breakpoints) {
  SpectralWeight w;
  w.phi_ = std::move(phi);

  std::vector<double> edges{0.0, 1.0};
  for (double b : breakpoints) {
    if (b > 0.0 && b < 1.0) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    for (const QuadNode& n : tanh_sinh_nodes(edges[s], edges[s + 1], kSegmentLevel)) {
      double p = w.phi_(n.x);
      if (!(p >= 0.0)) throw std::domain_error("SpectralWeight: phi must be nonnegative");
      w.nodes_.push_back({n.x, n.w, p});
      w.mass_ += n.w * p;
    }
  }

  if (std::fabs(w.mass_ - 1.0) > 1e-6)
    throw std::domain_error("SpectralWeight: phi does not integrate to 1 on (0,1)");

  // Monotonicity spot-check away from breakpoints, where phi may jump down.
  const int grid = 1024;
  double prev = w.phi_(0.5 / grid);
  for (int i = 1; i < grid; ++i) {
    double u = (i + 0.5) / grid;
    double cur = w.phi_(u);
    if (cur > prev + 1e-9 * std::max(1.0, std::fabs(prev)))
      throw std::domain_error("SpectralWeight: phi must be non-increasing");
    prev = cur;
  }
  return w;
}

SpectralWeight SpectralWeight::es_weight(EsLevel level) {
  level.validate();
  const double p = 1.0 - level.a;
  return from_function([p](double u) { return u < p ? 1.0 / p : 0.0; }, {p});
}

double SpectralWeight::integrate(const std::function<double(double)>& g) const {
  double acc = 0.0;
  for (const Node& n : nodes_) {
    if (n.phi != 0.0) acc += n.w * n.phi * g(n.u);
  }
  return acc;
}

double spectral_risk_gaussian(const GaussianLaw& law, const SpectralWeight& w) {
  law.validate();
  return -w.integrate([&](double u) { return law.mean + law.stddev * norm_quantile(u); });
}

double negative_mean_payoff(std::span<const double> payoff) {
  if (payoff.empty()) throw std::domain_error("negative_mean_payoff: empty payoff");
  double s = 0.0;
  for (double v : payoff) s += v;
  return -s / static_cast<double>(payoff.size());
}

double entropic_payoff(std::span<const double> payoff, double gamma) {
  if (payoff.empty()) throw std::domain_error("entropic_payoff: empty payoff");
  if (!(gamma > 0.0)) throw std::domain_error("entropic_payoff: gamma must be positive");
  // (1/gamma) log mean exp(-gamma x), accumulated against the running max
  double m = -payoff[0] * gamma;
  for (double v : payoff) m = std::max(m, -gamma * v);
  double s = 0.0;
  for (double v : payoff) s += std::exp(-gamma * v - m);
  return (m + std::log(s / static_cast<double>(payoff.size()))) / gamma;
}

RiskEvaluator negative_mean_risk() {
  return {[](const Point& z) { return negative_mean_payoff(z); }, 1.0};
}

RiskEvaluator coordinate_risk(std::size_t index) {
  return {[index](const Point& z) {
            if (index >= z.size()) throw std::domain_error("coordinate_risk: index out of range");
            return -z[index];
          },
          1.0};
}

RiskEvaluator entropic_payoff_risk(double gamma) {
  return {[gamma](const Point& z) { return entropic_payoff(z, gamma); }, std::nullopt};
}

}  // namespace riskavg
