#pragma once

#include <stdexcept>

namespace riskavg::chisq {

/// Degrees of freedom and noncentrality of a noncentral chi-squared law.
/// The noncentrality is the squared norm of the mean of the underlying
/// Gaussian vector (unit variances).
struct ChiSqParams {
  int dof = 1;
  double noncentrality = 0.0;
  void validate() const;
};

/// Raised by cdf_ratio when both cdfs underflow even on the log scale.
class TailUnderflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Central chi-squared cdf F_{chi2_m}(x) = P(m/2, x/2), absolute error <= 1e-12.
double central_cdf(int dof, double x);

/// log F_{chi2_m}(x); finite deep in the left tail where the cdf underflows.
double log_central_cdf(int dof, double x);

/// Central chi-squared density.
double central_pdf(int dof, double x);

/// Noncentral cdf via the Poisson mixture
///   F_k(x; lam) = sum_j e^{-lam/2} (lam/2)^j / j! * F_{chi2_{k+2j}}(x),
/// summed outward from the Poisson mode and truncated once the remaining
/// Poisson mass on each side drops below tail_tol/2.
double noncentral_cdf(const ChiSqParams& p, double x);

/// Same sum with the discarded Poisson mass reported; since every central
/// cdf is at most 1 the discarded mass bounds the truncation error.
struct MixtureValue {
  double value;
  double truncation_bound;
};
MixtureValue noncentral_cdf_with_bound(const ChiSqParams& p, double x,
                                       double tail_tol = 1e-14);

/// log F_k(x; lam), evaluated term-wise in log space.
double log_noncentral_cdf(const ChiSqParams& p, double x);

/// Noncentral chi-squared density (same mixture, central densities).
double noncentral_pdf(const ChiSqParams& p, double x);

/// dF_k(x; lam)/dlam = (F_{k+2}(x; lam) - F_k(x; lam)) / 2.
double noncentral_cdf_dlambda(const ChiSqParams& p, double x);

/// F_{n+2}(x; lam) / F_n(x; lam). Both cdfs come from the same truncated
/// mixture; when they underflow in linear space the ratio is formed from
/// the log-space evaluations instead. Requires x > 0.
double cdf_ratio(int dof, double noncentrality, double x);

/// Large-dof approximation F_{chi2_m}(x) ~ e^{-x/2}/sqrt(pi m) (ex/m)^{m/2},
/// assembled in log space. The linear-space value may underflow for large m.
double central_cdf_asymptotic(int dof, double x);
double log_central_cdf_asymptotic(int dof, double x);

}  // namespace riskavg::chisq
