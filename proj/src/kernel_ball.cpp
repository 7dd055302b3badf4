#include "riskavg/kernel_ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskavg {

Metric euclidean_metric() {
  return [](const Point& a, const Point& b) {
    if (a.size() != b.size())
      throw std::invalid_argument("euclidean_metric: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  };
}

KernelSpec KernelSpec::gaussian_exp(double decay) {
  if (!(decay >= 0.0)) throw std::domain_error("KernelSpec: decay must be nonnegative");
  return {Form::gaussian_exponential, decay, nullptr};
}

KernelSpec KernelSpec::uniform() { return {Form::uniform, 0.0, nullptr}; }

KernelSpec KernelSpec::from_function(std::function<double(double)> fn) {
  return {Form::custom, 0.0, std::move(fn)};
}

double kernel_weight(const KernelSpec& k, double t) {
  if (!(t >= 0.0)) throw std::domain_error("kernel_weight: distance must be nonnegative");
  switch (k.form) {
    case KernelSpec::Form::gaussian_exponential:
      return std::exp(-k.decay * t * t);
    case KernelSpec::Form::uniform:
      return 1.0;
    case KernelSpec::Form::custom: {
      double v = k.custom(t);
      if (!(v > 0.0)) throw std::domain_error("kernel_weight: custom kernel must be positive");
      return v;
    }
  }
  return 1.0;
}

void BallSpec::validate() const {
  if (!metric) throw std::domain_error("BallSpec: missing metric");
  if (!(radius >= 0.0)) throw std::domain_error("BallSpec: radius must be nonnegative");
}

std::vector<Atom> symmetric_translated_atoms(const Point& center, std::span<const Point> offsets,
                                             double p0, std::span<const double> p) {
  if (offsets.size() != p.size())
    throw std::invalid_argument("symmetric_translated_atoms: offsets/masses mismatch");
  std::vector<Atom> atoms;
  atoms.reserve(1 + 2 * offsets.size());
  atoms.push_back({center, p0});
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    Point plus = center;
    Point minus = center;
    for (std::size_t d = 0; d < center.size(); ++d) {
      plus[d] += offsets[i][d];
      minus[d] -= offsets[i][d];
    }
    atoms.push_back({std::move(plus), p[i]});
    atoms.push_back({std::move(minus), p[i]});
  }
  return atoms;
}

DiscreteAverage avg_risk_discrete(std::span<const Atom> atoms, const BallSpec& ball,
                                  const KernelSpec& kernel, const RiskEvaluator& rho) {
  ball.validate();
  if (atoms.empty()) throw std::domain_error("avg_risk_discrete: no atoms");

  DiscreteAverage out;
  double wsum = 0.0;
  double vsum = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.mass >= 0.0)) throw std::domain_error("avg_risk_discrete: negative atom mass");
    if (a.mass == 0.0) continue;
    double d = ball.metric(ball.center, a.location);
    if (d > ball.radius) continue;
    double w = a.mass * kernel_weight(kernel, d);
    wsum += w;
    vsum += w * rho.eval(a.location);
    out.cloud.points.push_back(a.location);
    out.cloud.weights.push_back(w);
  }
  if (wsum < kWeightSumFloor) throw EmptyBallError(0.0);

  for (double& w : out.cloud.weights) w /= wsum;
  out.value = vsum / wsum;
  return out;
}

namespace {
constexpr std::uint64_t kChunkSize = 1 << 16;
}

McEstimate avg_risk_mc(const BaseSampler& sampler, const BallSpec& ball, const KernelSpec& kernel,
                       const RiskEvaluator& rho, std::uint64_t n_draws, std::uint64_t seed) {
  ball.validate();
  if (n_draws == 0) throw std::domain_error("avg_risk_mc: n_draws must be positive");

  double sw = 0.0, swr = 0.0, sw2 = 0.0, sw2r = 0.0, sw2r2 = 0.0;
  std::uint64_t retained = 0;
  double sup_rho = -std::numeric_limits<double>::infinity();

  const std::uint64_t chunks = (n_draws + kChunkSize - 1) / kChunkSize;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    CounterRng rng(seed, c);
    const std::uint64_t lo = c * kChunkSize;
    const std::uint64_t hi = std::min(n_draws, lo + kChunkSize);
    for (std::uint64_t i = lo; i < hi; ++i) {
      Point z = sampler.draw(rng);
      double d = ball.metric(ball.center, z);
      if (d > ball.radius) continue;
      double w = kernel_weight(kernel, d);
      double r = rho.eval(z);
      ++retained;
      sup_rho = std::max(sup_rho, r);
      sw += w;
      swr += w * r;
      sw2 += w * w;
      sw2r += w * w * r;
      sw2r2 += w * w * r * r;
    }
  }

  const double accept = static_cast<double>(retained) / static_cast<double>(n_draws);
  if (retained == 0 || sw < kWeightSumFloor) throw EmptyBallError(accept);

  McEstimate est;
  est.estimate = swr / sw;
  // delta-method variance of the ratio: sum w_i^2 (rho_i - m)^2 / (sum w_i)^2
  double m = est.estimate;
  double var = (sw2r2 - 2.0 * m * sw2r + m * m * sw2) / (sw * sw);
  est.std_error = std::sqrt(std::max(var, 0.0));
  est.acceptance_rate = accept;
  est.retained = retained;
  est.sup_rho = sup_rho;
  return est;
}

TiltedAverage large_r_limit_mc(const BaseSampler& sampler, const Point& center,
                               const Metric& metric, const KernelSpec& kernel,
                               const RiskEvaluator& rho, std::uint64_t n_draws,
                               std::uint64_t seed) {
  BallSpec ball{metric, center, std::numeric_limits<double>::infinity()};
  McEstimate est = avg_risk_mc(sampler, ball, kernel, rho, n_draws, seed);
  return {est.estimate, est.std_error};
}

std::vector<SweepRow> radius_sweep(const std::function<McEstimate(double)>& engine,
                                   std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw std::domain_error("radius_sweep: grid must be sorted");
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double r : grid) {
    if (!(r >= 0.0)) throw std::domain_error("radius_sweep: radii must be nonnegative");
    SweepRow row;
    row.r = r;
    try {
      McEstimate est = engine(r);
      row.estimate = est;
      if (est.retained < kLowAcceptanceRetained) row.flag = "low_acceptance";
    } catch (const EmptyBallError&) {
      row.flag = "empty_ball";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

PerturbationCheck perturbation_continuity_check(const KernelSpec& k, double delta,
                                                const std::function<double(const KernelSpec&)>& engine) {
  if (!(delta >= 0.0)) throw std::domain_error("perturbation_continuity_check: delta must be >= 0");
  if (k.form == KernelSpec::Form::custom)
    throw std::domain_error("perturbation_continuity_check: custom kernels have no decay to shift");
  KernelSpec perturbed = KernelSpec::gaussian_exp(k.decay + delta);
  double base = engine(k);
  double shifted = engine(perturbed);
  return {base, shifted, std::fabs(shifted - base)};
}

}  // namespace riskavg
