#include "riskavg/chisq.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "riskavg/incgamma.hpp"

namespace riskavg::chisq {

namespace {

constexpr double kLn2 = 0.6931471805599453094172321214581766;
constexpr double kPi = 3.1415926535897932384626433832795029;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_x(double x, const char* who) {
  if (!(x >= 0.0)) throw std::domain_error(std::string(who) + ": x must be nonnegative");
}

// Walks Poisson(h) weights outward from the mode, invoking term(j, p_j) for
// every retained index. Stops a direction once the remaining mass on that
// side, bounded geometrically, drops below tail_tol/2. Returns the total
// discarded mass bound. Starting at the mode keeps every evaluated p_j in
// range even when h is large and p_0 would underflow.
double poisson_walk(double h, double tail_tol, const std::function<void(int, double)>& term) {
  if (h <= 0.0) {
    term(0, 1.0);
    return 0.0;
  }
  const int jstar = static_cast<int>(h);
  const double pstar = std::exp(-h + jstar * std::log(h) - std::lgamma(jstar + 1.0));
  term(jstar, pstar);

  double tail_up = 0.0;
  {
    double p = pstar;
    int j = jstar;
    for (;;) {
      double q = h / (j + 1.0);
      if (q < 1.0) {
        double bound = p * q / (1.0 - q);
        if (bound < 0.5 * tail_tol) {
          tail_up = bound;
          break;
        }
      }
      ++j;
      p *= h / j;
      term(j, p);
    }
  }

  double tail_down = 0.0;
  if (jstar > 0) {
    double p = pstar;
    int j = jstar;
    while (j > 0) {
      double q = j / h;  // p_{j-1}/p_j, decreasing as j falls
      if (q < 1.0) {
        double bound = p * q / (1.0 - q);
        if (bound < 0.5 * tail_tol) {
          tail_down = bound;
          break;
        }
      }
      p *= j / h;
      --j;
      term(j, p);
    }
  }
  return tail_up + tail_down;
}

}  // namespace

void ChiSqParams::validate() const {
  if (dof < 1) throw std::domain_error("ChiSqParams: dof must be >= 1");
  if (!(noncentrality >= 0.0))
    throw std::domain_error("ChiSqParams: noncentrality must be nonnegative");
}

double central_cdf(int dof, double x) {
  if (dof < 1) throw std::domain_error("central_cdf: dof must be >= 1");
  check_x(x, "central_cdf");
  if (x == 0.0) return 0.0;
  return gamma_p(0.5 * dof, 0.5 * x);
}

double log_central_cdf(int dof, double x) {
  if (dof < 1) throw std::domain_error("log_central_cdf: dof must be >= 1");
  check_x(x, "log_central_cdf");
  if (x == 0.0) return -kInf;
  return log_gamma_p(0.5 * dof, 0.5 * x);
}

double central_pdf(int dof, double x) {
  if (dof < 1) throw std::domain_error("central_pdf: dof must be >= 1");
  check_x(x, "central_pdf");
  const double a = 0.5 * dof;
  if (x == 0.0) {
    if (dof == 1) return kInf;
    if (dof == 2) return 0.5;
    return 0.0;
  }
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * kLn2 - std::lgamma(a));
}

MixtureValue noncentral_cdf_with_bound(const ChiSqParams& p, double x, double tail_tol) {
  p.validate();
  check_x(x, "noncentral_cdf");
  if (x == 0.0) return {0.0, 0.0};
  const double h = 0.5 * p.noncentrality;
  const double half_x = 0.5 * x;
  double sum = 0.0;
  double bound = poisson_walk(h, tail_tol, [&](int j, double pj) {
    sum += pj * gamma_p(0.5 * p.dof + j, half_x);
  });
  return {sum, bound};
}

double noncentral_cdf(const ChiSqParams& p, double x) {
  MixtureValue mv = noncentral_cdf_with_bound(p, x);
  return std::clamp(mv.value, 0.0, 1.0);
}

double log_noncentral_cdf(const ChiSqParams& p, double x) {
  p.validate();
  check_x(x, "log_noncentral_cdf");
  if (x == 0.0) return -kInf;
  const double h = 0.5 * p.noncentrality;
  const double half_x = 0.5 * x;

  // Deep-tail evaluation: walk up from j = 0 in log space. The mixture can
  // be dominated either by the Poisson weights (near the mode) or by the
  // steeply decaying central cdfs (small j), so termination requires both
  // the Poisson tail and the running term contribution to be negligible.
  double log_p = -h;  // log p_0
  double running_max = -kInf;
  std::vector<double> terms;
  double poisson_head = 0.0;  // accumulated Poisson mass
  for (int j = 0;; ++j) {
    if (j > 0) log_p += std::log(h) - std::log(static_cast<double>(j));
    double lt = log_p + log_gamma_p(0.5 * p.dof + j, half_x);
    terms.push_back(lt);
    running_max = std::max(running_max, lt);
    poisson_head += std::exp(log_p);
    bool poisson_done = (1.0 - poisson_head) < 1e-18 || (j > h && std::exp(log_p) < 1e-18);
    bool term_negligible = lt < running_max - 60.0;
    if (poisson_done && (j >= 4 || h == 0.0) && term_negligible) break;
    if (h == 0.0) break;  // only j = 0 contributes
    if (j > 200000) break;
  }
  if (!std::isfinite(running_max)) return -kInf;
  double s = 0.0;
  for (double t : terms) s += std::exp(t - running_max);
  return running_max + std::log(s);
}

double noncentral_pdf(const ChiSqParams& p, double x) {
  p.validate();
  check_x(x, "noncentral_pdf");
  const double h = 0.5 * p.noncentrality;
  double sum = 0.0;
  poisson_walk(h, 1e-15, [&](int j, double pj) { sum += pj * central_pdf(p.dof + 2 * j, x); });
  return sum;
}

double noncentral_cdf_dlambda(const ChiSqParams& p, double x) {
  p.validate();
  check_x(x, "noncentral_cdf_dlambda");
  ChiSqParams up{p.dof + 2, p.noncentrality};
  return 0.5 * (noncentral_cdf(up, x) - noncentral_cdf(p, x));
}

double cdf_ratio(int dof, double noncentrality, double x) {
  if (!(x > 0.0)) throw std::domain_error("cdf_ratio: x must be positive");
  ChiSqParams lo{dof, noncentrality};
  ChiSqParams hi{dof + 2, noncentrality};
  double fn = noncentral_cdf(lo, x);
  if (fn >= 1e-280) return noncentral_cdf(hi, x) / fn;
  double log_lo = log_noncentral_cdf(lo, x);
  double log_hi = log_noncentral_cdf(hi, x);
  if (!std::isfinite(log_lo) || !std::isfinite(log_hi))
    throw TailUnderflowError("cdf_ratio: cdf underflows beyond log-space range");
  return std::exp(log_hi - log_lo);
}

double log_central_cdf_asymptotic(int dof, double x) {
  if (dof < 1) throw std::domain_error("central_cdf_asymptotic: dof must be >= 1");
  if (!(x > 0.0)) throw std::domain_error("central_cdf_asymptotic: x must be positive");
  const double m = static_cast<double>(dof);
  return -0.5 * x - 0.5 * std::log(kPi * m) + 0.5 * m * (1.0 + std::log(x) - std::log(m));
}

double central_cdf_asymptotic(int dof, double x) {
  return std::exp(log_central_cdf_asymptotic(dof, x));
}

}  // namespace riskavg::chisq
