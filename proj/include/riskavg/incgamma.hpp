#pragma once

namespace riskavg {

/// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
/// Series expansion for x < a+1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);

/// log of P(a,x), finite even where P underflows (x << a regime).
double log_gamma_p(double a, double x);

}  // namespace riskavg
