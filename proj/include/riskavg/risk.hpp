#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace riskavg {

/// One-dimensional Gaussian payoff law identified by (mean, stddev).
struct GaussianLaw {
  double mean = 0.0;
  double stddev = 1.0;
  void validate() const;
};

/// Expected Shortfall level a in (0,1); the tail being averaged has mass 1-a.
struct EsLevel {
  double a = 0.95;
  void validate() const;
};

/// Tail constant c_a = phi_n(Phi^{-1}(a)) / (1-a) of the Gaussian ES closed form.
double es_tail_constant(EsLevel level);

/// ES of a Gaussian law: -mean + stddev * c_a.
double es_gaussian(const GaussianLaw& law, EsLevel level);

/// Empirical ES: mean of the worst (1-a)-fraction of outcomes, negated.
/// The tail cut is interpolated (lower floor((1-a)n) order statistics plus a
/// fractional share of the next one), which removes the O(1/n) bias of a
/// hard order-statistic cut.
double es_empirical(std::span<const double> sample, EsLevel level);

/// Entropic risk of a Gaussian law: -mean + gamma * stddev^2 / 2.
double entropic_gaussian(const GaussianLaw& law, double gamma);

/// Non-increasing weight on (0,1), normalized to unit mass. Internally
/// carries a composite tanh-sinh grid clustered at the endpoints (and at any
/// declared breakpoints), since Phi^{-1} diverges at u in {0,1}.
class SpectralWeight {
 public:
  /// Builds and validates; throws std::domain_error if phi is not
  /// normalized to 1 within 1e-6 or fails the non-increasing check.
  static SpectralWeight from_function(std::function<double(double)> phi,
                                      std::vector<double> breakpoints = {});

  /// The ES weight at level a: (1/(1-a)) on (0, 1-a), zero beyond.
  static SpectralWeight es_weight(EsLevel level);

  double operator()(double u) const { return phi_(u); }

  /// Integral of g(u) * phi(u) over (0,1) on the cached grid.
  double integrate(const std::function<double(double)>& g) const;

  double total_mass() const { return mass_; }

 private:
  SpectralWeight() = default;
  struct Node {
    double u;
    double w;
    double phi;
  };
  std::function<double(double)> phi_;
  std::vector<Node> nodes_;
  double mass_ = 0.0;
};

/// Spectral risk of a Gaussian law: -integral of (mean + stddev*Phi^{-1}(u)) phi(u) du.
double spectral_risk_gaussian(const GaussianLaw& law, const SpectralWeight& w);

// --- payoff points -------------------------------------------------------
//
// The averaging machinery works on abstract payoff points. A Point is a
// coordinate vector whose meaning is fixed by the experiment: a payoff over
// finitely many equally likely states, a vector in R^n, or a (mean, stddev)
// pair indexing a Gaussian law.

using Point = std::vector<double>;

/// Risk functional on payoff points. Deterministic for identical inputs;
/// the optional Lipschitz constant feeds small-radius diagnostics.
struct RiskEvaluator {
  std::function<double(const Point&)> eval;
  std::optional<double> lipschitz;
};

/// rho(z) = -mean(z) over equally likely states (linear).
RiskEvaluator negative_mean_risk();

/// rho(z) = -z[index] (linear coordinate functional).
RiskEvaluator coordinate_risk(std::size_t index);

/// Entropic risk of a finite-state payoff with uniform state weights.
RiskEvaluator entropic_payoff_risk(double gamma);

/// Raw helpers behind the canned evaluators.
double negative_mean_payoff(std::span<const double> payoff);
double entropic_payoff(std::span<const double> payoff, double gamma);

}  // namespace riskavg
