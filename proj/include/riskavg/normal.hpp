#pragma once

namespace riskavg {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal distribution function, accurate to a relative error
/// below 1e-14 over the full double range (erfc based).
double norm_cdf(double x);

/// Inverse of norm_cdf on (0,1). A rational approximation seeds one Halley
/// refinement against norm_cdf, which brings the result to within a few ulp.
/// Throws std::domain_error outside (0,1).
double norm_quantile(double p);

}  // namespace riskavg
