#include "riskavg/incgamma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace riskavg {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// Series for the lower incomplete gamma in the x < a+1 regime.
// P(a,x) = S * exp(a*log(x) - x - lgamma(a)) with S = sum_n x^n / (a(a+1)...(a+n)).
// All terms are positive, so S is safe to take logs of.
double lower_series_sum(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps) return sum;
  }
  throw std::runtime_error("gamma_p: series failed to converge");
}

// Modified Lentz continued fraction for Q(a,x), x >= a+1.
double upper_cf(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps)
      return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  }
  throw std::runtime_error("gamma_q: continued fraction failed to converge");
}

void check_args(double a, double x, const char* who) {
  if (!(a > 0.0)) throw std::domain_error(std::string(who) + ": a must be positive");
  if (!(x >= 0.0)) throw std::domain_error(std::string(who) + ": x must be nonnegative");
}

}  // namespace

double gamma_p(double a, double x) {
  check_args(a, x, "gamma_p");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    double s = lower_series_sum(a, x);
    return s * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  return 1.0 - upper_cf(a, x);
}

double gamma_q(double a, double x) {
  check_args(a, x, "gamma_q");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p(a, x);
  return upper_cf(a, x);
}

double log_gamma_p(double a, double x) {
  check_args(a, x, "log_gamma_p");
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (x < a + 1.0) {
    double s = lower_series_sum(a, x);
    return std::log(s) + a * std::log(x) - x - std::lgamma(a);
  }
  return std::log1p(-upper_cf(a, x));
}

}  // namespace riskavg
