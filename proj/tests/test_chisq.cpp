#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "riskavg/chisq.hpp"
#include "riskavg/experiments.hpp"
#include "riskavg/quadrature.hpp"
#include "riskavg/rng.hpp"

using namespace riskavg;
using chisq::ChiSqParams;

TEST_SUITE_BEGIN("chisq");

TEST_CASE("central cdf: zero, exponential identity, quadrature oracle") {
  for (int m : {1, 2, 5, 10, 40}) CHECK(chisq::central_cdf(m, 0.0) == 0.0);

  // chi-squared with 2 dof is Exp(1/2): F(x) = 1 - e^{-x/2}, so F(2 ln 2) = 1/2
  CHECK(chisq::central_cdf(2, 2.0 * std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-13));

  // m = 10, x = 3 against direct quadrature of the density
  double quad = adaptive_simpson([](double t) { return chisq::central_pdf(10, t); }, 0.0, 3.0,
                                 1e-13);
  CHECK(std::fabs(chisq::central_cdf(10, 3.0) - quad) < 1e-10);
  // 40-digit reference
  CHECK(chisq::central_cdf(10, 3.0) == doctest::Approx(0.01857593622214067).epsilon(1e-12));
}

TEST_CASE("noncentral cdf: lam=0 equals central exactly") {
  for (int k : {1, 3, 8}) {
    for (double x : {0.2, 1.0, 4.0, 11.0}) {
      CHECK(chisq::noncentral_cdf({k, 0.0}, x) == chisq::central_cdf(k, x));
    }
  }
}

TEST_CASE("noncentral cdf against density quadrature") {
  // the stated oracle: adaptive quadrature over the density mixture
  ChiSqParams p{3, 1.0 / 3.0};
  double quad = noncentral_cdf_by_quadrature(p, 3.0);
  CHECK(std::fabs(chisq::noncentral_cdf(p, 3.0) - quad) < 1e-10);
  // 40-digit references
  CHECK(chisq::noncentral_cdf({3, 1.0 / 3.0}, 3.0) ==
        doctest::Approx(0.558679822872873298).epsilon(1e-12));
  CHECK(chisq::noncentral_cdf({5, 1.0 / 3.0}, 3.0) ==
        doctest::Approx(0.27060631228221520).epsilon(1e-12));
}

TEST_CASE("noncentral cdf monotone in x") {
  CounterRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int k = 1 + int(rng.next_u64() % 10);
    double lam = 4.0 * rng.next_uniform();
    double x1 = 12.0 * rng.next_uniform();
    double x2 = x1 + 6.0 * rng.next_uniform();
    CHECK(chisq::noncentral_cdf({k, lam}, x2) >= chisq::noncentral_cdf({k, lam}, x1));
  }
}

TEST_CASE("mixture truncation bound dominates the refinement error") {
  CounterRng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    int k = 1 + int(rng.next_u64() % 12);
    double lam = 8.0 * rng.next_uniform();
    double x = 0.3 + 12.0 * rng.next_uniform();
    auto coarse = chisq::noncentral_cdf_with_bound({k, lam}, x, 1e-14);
    auto fine = chisq::noncentral_cdf_with_bound({k, lam}, x, 1e-18);
    CHECK(std::fabs(coarse.value - fine.value) <= coarse.truncation_bound + 1e-15);
  }
}

TEST_CASE("derivative identity vs central finite differences") {
  // the example triple, two-sided difference at h = 1e-5
  {
    ChiSqParams p{3, 1.0 / 3.0};
    double h = 1e-5;
    double fd = (chisq::noncentral_cdf({3, p.noncentrality + h}, 3.0) -
                 chisq::noncentral_cdf({3, p.noncentrality - h}, 3.0)) /
                (2.0 * h);
    CHECK(std::fabs(chisq::noncentral_cdf_dlambda(p, 3.0) - fd) < 1e-6);
  }
  // lam = 0 edge, one-sided
  {
    double h = 1e-5;
    double fd = (chisq::noncentral_cdf({3, h}, 3.0) - chisq::noncentral_cdf({3, 0.0}, 3.0)) / h;
    CHECK(std::fabs(chisq::noncentral_cdf_dlambda({3, 0.0}, 3.0) - fd) < 1e-6);
  }
  // deep right tail: both cdfs saturate
  CHECK(std::fabs(chisq::noncentral_cdf_dlambda({3, 1.0}, 1e4)) <= 1e-10);

  // 50 random triples
  CounterRng rng(23);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    int k = 1 + int(rng.next_u64() % 12);
    double lam = 0.05 + 6.0 * rng.next_uniform();
    double x = 0.3 + 12.0 * rng.next_uniform();
    double h = 1e-5;
    double fd = (chisq::noncentral_cdf({k, lam + h}, x) - chisq::noncentral_cdf({k, lam - h}, x)) /
                (2.0 * h);
    worst = std::max(worst, std::fabs(chisq::noncentral_cdf_dlambda({k, lam}, x) - fd));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("dof and noncentrality monotonicity") {
  CounterRng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    int k = 1 + int(rng.next_u64() % 15);
    double lam = 6.0 * rng.next_uniform();
    double x = 0.2 + 14.0 * rng.next_uniform();
    CHECK(chisq::noncentral_cdf({k + 2, lam}, x) <= chisq::noncentral_cdf({k, lam}, x) + 1e-15);
    CHECK(chisq::noncentral_cdf({k, lam + 0.5}, x) <= chisq::noncentral_cdf({k, lam}, x) + 1e-12);
  }
}

TEST_CASE("cdf ratio: asymptotics and bounds") {
  const double lam = 1.0 / 3.0, x = 3.0;

  // n * ratio approaches x; 5% band at n = 1e4
  double r4 = 1e4 * chisq::cdf_ratio(10000, lam, x);
  CHECK(r4 > 2.85);
  CHECK(r4 < 3.15);

  // ratio <= 1 everywhere tested (stochastic ordering in dof)
  CounterRng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + int(rng.next_u64() % 30);
    double l = 4.0 * rng.next_uniform();
    double xx = 0.3 + 10.0 * rng.next_uniform();
    CHECK(chisq::cdf_ratio(n, l, xx) <= 1.0 + 1e-12);
  }

  // error decreasing across n in {1e2, 1e3, 1e4}
  double e2 = std::fabs(1e2 * chisq::cdf_ratio(100, lam, x) - x);
  double e3 = std::fabs(1e3 * chisq::cdf_ratio(1000, lam, x) - x);
  double e4 = std::fabs(1e4 * chisq::cdf_ratio(10000, lam, x) - x);
  CHECK(e3 < e2);
  CHECK(e4 < e3);
}

TEST_CASE("deep tail ratio uses the log-space path") {
  // F_n underflows in linear space here; the ratio must still come out finite
  CHECK(chisq::noncentral_cdf({10000, 1.0 / 3.0}, 3.0) == 0.0);
  double r = chisq::cdf_ratio(10000, 1.0 / 3.0, 3.0);
  CHECK(std::isfinite(r));
  CHECK(r > 0.0);
  CHECK_THROWS_AS(chisq::cdf_ratio(3, 0.0, -1.0), std::domain_error);
}

TEST_CASE("central cdf asymptotic") {
  // relative error vs the exact cdf, compared in log space
  auto rel_err = [](int m) {
    double lg_exact = chisq::log_central_cdf(m, 3.0);
    double lg_asym = chisq::log_central_cdf_asymptotic(m, 3.0);
    return std::fabs(std::expm1(lg_asym - lg_exact));
  };
  CHECK(rel_err(200) <= 0.10);
  double prev = 1e9;
  for (int m : {50, 100, 200, 400}) {
    double e = rel_err(m);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(std::isfinite(chisq::log_central_cdf_asymptotic(10000, 3.0)));
}

TEST_CASE("parameter validation") {
  ChiSqParams bad_dof{0, 1.0};
  ChiSqParams bad_lam{3, -0.1};
  CHECK_THROWS_AS(bad_dof.validate(), std::domain_error);
  CHECK_THROWS_AS(bad_lam.validate(), std::domain_error);
  CHECK_THROWS_AS(chisq::central_cdf(3, -1.0), std::domain_error);
}

TEST_SUITE_END();
