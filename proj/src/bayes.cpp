#include "riskavg/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskavg::bayes {

namespace {

constexpr std::uint64_t kChunkSize = 1 << 16;
constexpr std::uint64_t kRowStreamBase = 1ull << 32;  // keeps row streams clear of chunk ids
constexpr int kBootstrapReplicates = 50;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

GaussianLaw draw_law(CounterRng& rng, const NormalGammaPrior& prior) {
  double tau = rng.next_gamma(prior.alpha, prior.beta);
  double mu = prior.mu0 + rng.next_gaussian() / std::sqrt(prior.kk * tau);
  return {mu, 1.0 / std::sqrt(tau)};
}

// Prior draws with their W2 distances to the base law and ES values,
// generated in fixed 2^16-draw substreams of (seed, chunk).
struct PriorDraws {
  std::vector<double> mu, sigma, dist, rho;
};

PriorDraws make_draws(const BayesSetup& s, std::uint64_t n, std::uint64_t seed) {
  const double ca = es_tail_constant(s.level);
  PriorDraws d;
  d.mu.reserve(n);
  d.sigma.reserve(n);
  d.dist.reserve(n);
  d.rho.reserve(n);
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    CounterRng rng(seed, c);
    const std::uint64_t hi = std::min(n, (c + 1) * kChunkSize);
    for (std::uint64_t i = c * kChunkSize; i < hi; ++i) {
      GaussianLaw z = draw_law(rng, s.prior);
      d.mu.push_back(z.mean);
      d.sigma.push_back(z.stddev);
      d.dist.push_back(w2_gaussian(s.base, z));
      d.rho.push_back(-z.mean + z.stddev * ca);
    }
  }
  return d;
}

AvgResult avg_from_draws(const PriorDraws& d, const BayesSetup& s, double r) {
  double sw = 0.0, swr = 0.0, swmu = 0.0, swsig = 0.0;
  double sw2 = 0.0, sw2r = 0.0, sw2r2 = 0.0;
  std::uint64_t retained = 0;
  const std::size_t n = d.mu.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (d.dist[i] > r) continue;
    double w = std::exp(-s.lambda * d.dist[i] * d.dist[i]);
    ++retained;
    sw += w;
    swr += w * d.rho[i];
    swmu += w * d.mu[i];
    swsig += w * d.sigma[i];
    sw2 += w * w;
    sw2r += w * w * d.rho[i];
    sw2r2 += w * w * d.rho[i] * d.rho[i];
  }
  double accept = static_cast<double>(retained) / static_cast<double>(n);
  if (retained == 0 || sw < kWeightSumFloor) throw EmptyBallError(accept);

  AvgResult out;
  out.estimate = swr / sw;
  double m = out.estimate;
  double var = (sw2r2 - 2.0 * m * sw2r + m * m * sw2) / (sw * sw);
  out.se = std::sqrt(std::max(var, 0.0));
  out.mu_bar = swmu / sw;
  out.sigma_bar = swsig / sw;
  out.acceptance_rate = accept;
  out.retained = retained;
  return out;
}

// Empirical ES of a bootstrap replicate given per-point multiplicities over
// the ascending-sorted sample; avoids re-sorting each replicate.
double es_of_counts(const std::vector<double>& sorted, const std::vector<std::uint32_t>& counts,
                    std::uint64_t total, double level_a) {
  const double tail = (1.0 - level_a) * static_cast<double>(total);
  double need = tail;
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted.size() && need > 0.0; ++i) {
    double take = std::min<double>(counts[i], need);
    acc += take * sorted[i];
    need -= take;
  }
  return -acc / tail;
}

DaggResult dagg_from_draws(const PriorDraws& d, const BayesSetup& s, double r, CounterRng& rng) {
  // Retained components with cumulative kernel weights for inverse-cdf picks.
  std::vector<std::size_t> idx;
  std::vector<double> cumw;
  double sw = 0.0;
  for (std::size_t i = 0; i < d.mu.size(); ++i) {
    if (d.dist[i] > r) continue;
    sw += std::exp(-s.lambda * d.dist[i] * d.dist[i]);
    idx.push_back(i);
    cumw.push_back(sw);
  }
  const std::size_t m = idx.size();
  if (m == 0 || sw < kWeightSumFloor)
    throw EmptyBallError(static_cast<double>(m) / static_cast<double>(d.mu.size()));

  // One Gaussian variate per retained component draw; pooled size = retained.
  std::vector<double> pooled(m);
  for (std::size_t j = 0; j < m; ++j) {
    double u = rng.next_uniform() * sw;
    std::size_t pos = static_cast<std::size_t>(
        std::lower_bound(cumw.begin(), cumw.end(), u) - cumw.begin());
    if (pos >= m) pos = m - 1;
    std::size_t i = idx[pos];
    pooled[j] = d.mu[i] + d.sigma[i] * rng.next_gaussian();
  }

  DaggResult out;
  out.estimate = es_empirical(pooled, s.level);

  // Bootstrap over the pooled component draws.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> reps(kBootstrapReplicates);
  std::vector<std::uint32_t> counts(m);
  for (int b = 0; b < kBootstrapReplicates; ++b) {
    std::fill(counts.begin(), counts.end(), 0u);
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t pick = static_cast<std::size_t>(rng.next_u64() % m);
      ++counts[pick];
    }
    reps[b] = es_of_counts(sorted, counts, m, s.level.a);
  }
  double mean = 0.0;
  for (double v : reps) mean += v;
  mean /= reps.size();
  double var = 0.0;
  for (double v : reps) var += (v - mean) * (v - mean);
  var /= (reps.size() - 1);
  out.se = std::sqrt(var);
  return out;
}

}  // namespace

NormalGammaPrior NormalGammaPrior::centered(const GaussianLaw& baseline, double k, double alpha) {
  baseline.validate();
  double tau_x = 1.0 / (baseline.stddev * baseline.stddev);
  NormalGammaPrior p{baseline.mean, k, alpha, alpha / tau_x};
  p.validate();
  return p;
}

void NormalGammaPrior::validate() const {
  if (!(alpha > 1.0))
    throw std::domain_error(
        "NormalGammaPrior: shape must exceed 1 (finite Var(mu_Z); the gamma sampler "
        "requires shape > 1)");
  if (!(beta > 0.0)) throw std::domain_error("NormalGammaPrior: rate must be positive");
  if (!(kk > 0.0)) throw std::domain_error("NormalGammaPrior: precision scaling must be positive");
  if (!std::isfinite(mu0)) throw std::domain_error("NormalGammaPrior: location must be finite");
}

void BayesSetup::validate() const {
  base.validate();
  prior.validate();
  level.validate();
  if (!(lambda >= 0.0)) throw std::domain_error("BayesSetup: lambda must be nonnegative");
}

double w2_gaussian(const GaussianLaw& a, const GaussianLaw& b) {
  a.validate();
  b.validate();
  double dm = a.mean - b.mean;
  double ds = a.stddev - b.stddev;
  return std::sqrt(dm * dm + ds * ds);
}

std::vector<GaussianLaw> sample_normal_gamma(const NormalGammaPrior& prior, std::uint64_t n,
                                             std::uint64_t seed) {
  prior.validate();
  std::vector<GaussianLaw> out;
  out.reserve(n);
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    CounterRng rng(seed, c);
    const std::uint64_t hi = std::min(n, (c + 1) * kChunkSize);
    for (std::uint64_t i = c * kChunkSize; i < hi; ++i) out.push_back(draw_law(rng, prior));
  }
  return out;
}

AvgResult rho_avg_bayes(const BayesSetup& s, double r, std::uint64_t n_draws, std::uint64_t seed) {
  s.validate();
  if (!(r >= 0.0)) throw std::domain_error("rho_avg_bayes: r must be nonnegative");
  PriorDraws d = make_draws(s, n_draws, seed);
  return avg_from_draws(d, s, r);
}

double quantile_aggregated_es(double mu_bar, double sigma_bar, EsLevel level) {
  if (!(sigma_bar > 0.0))
    throw std::domain_error("quantile_aggregated_es: sigma_bar must be positive");
  return -mu_bar + sigma_bar * es_tail_constant(level);
}

DaggResult distribution_aggregated_es(const BayesSetup& s, double r, std::uint64_t n_draws,
                                      std::uint64_t seed) {
  s.validate();
  if (!(r >= 0.0)) throw std::domain_error("distribution_aggregated_es: r must be nonnegative");
  PriorDraws d = make_draws(s, n_draws, seed);
  CounterRng rng(seed, kRowStreamBase);
  return dagg_from_draws(d, s, r, rng);
}

double worst_case_es(const GaussianLaw& base, double r, EsLevel level) {
  base.validate();
  if (!(r >= 0.0)) throw std::domain_error("worst_case_es: r must be nonnegative");
  double ca = es_tail_constant(level);
  return es_gaussian(base, level) + r * std::sqrt(1.0 + ca * ca);
}

std::vector<DominanceRow> dominance_chain(const BayesSetup& s, std::span<const double> r_grid,
                                          std::uint64_t n_draws, std::uint64_t seed) {
  s.validate();
  if (!std::is_sorted(r_grid.begin(), r_grid.end()))
    throw std::domain_error("dominance_chain: r grid must be sorted");

  const PriorDraws draws = make_draws(s, n_draws, seed);
  const double rho_base = es_gaussian(s.base, s.level);

  std::vector<DominanceRow> rows;
  rows.reserve(r_grid.size());
  for (std::size_t row_i = 0; row_i < r_grid.size(); ++row_i) {
    const double r = r_grid[row_i];
    if (!(r >= 0.0)) throw std::domain_error("dominance_chain: negative radius");
    DominanceRow row;
    row.r = r;
    row.rho_base = rho_base;
    row.rho_wc = worst_case_es(s.base, r, s.level);
    try {
      AvgResult avg = avg_from_draws(draws, s, r);
      row.rho_avg = avg.estimate;
      row.se_avg = avg.se;
      row.rho_qagg = quantile_aggregated_es(avg.mu_bar, avg.sigma_bar, s.level);
      row.acceptance_rate = avg.acceptance_rate;
      CounterRng row_rng(seed, kRowStreamBase + row_i);
      DaggResult dagg = dagg_from_draws(draws, s, r, row_rng);
      row.rho_dagg = dagg.estimate;
      row.se_dagg = dagg.se;
      if (avg.retained < kLowAcceptanceRetained) row.flags = "low_acceptance";
    } catch (const EmptyBallError& e) {
      row.rho_avg = row.se_avg = row.rho_qagg = row.rho_dagg = row.se_dagg = kNaN;
      row.acceptance_rate = e.acceptance_rate();
      row.flags = "empty_ball";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SensitivityRow> sensitivity_sweep(const SensitivitySpec& spec, std::uint64_t n_draws,
                                              std::uint64_t seed) {
  spec.base.validate();
  spec.level.validate();
  std::vector<SensitivityRow> rows;

  auto run_curve = [&](char panel, double alpha, double k, double lambda) {
    BayesSetup s{spec.base, lambda, NormalGammaPrior::centered(spec.base, k, alpha), spec.level};
    PriorDraws draws = make_draws(s, n_draws, seed);
    AvgResult limit = avg_from_draws(draws, s, std::numeric_limits<double>::infinity());
    for (double r : spec.r_grid) {
      SensitivityRow row;
      row.panel = panel;
      row.alpha = alpha;
      row.k = k;
      row.lambda = lambda;
      row.r = r;
      row.large_r_limit = limit.estimate;
      try {
        AvgResult avg = avg_from_draws(draws, s, r);
        row.estimate = avg.estimate;
        row.se = avg.se;
        row.acceptance_rate = avg.acceptance_rate;
        if (avg.retained < kLowAcceptanceRetained) row.flags = "low_acceptance";
      } catch (const EmptyBallError& e) {
        row.estimate = row.se = kNaN;
        row.acceptance_rate = e.acceptance_rate();
        row.flags = "empty_ball";
      }
      rows.push_back(std::move(row));
    }
  };

  for (const auto& [alpha, k] : spec.priors) run_curve('a', alpha, k, spec.lambda_fixed);
  for (double lambda : spec.lambdas)
    run_curve('b', spec.prior_fixed.first, spec.prior_fixed.second, lambda);
  return rows;
}

}  // namespace riskavg::bayes
