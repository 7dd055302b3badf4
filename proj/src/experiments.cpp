#include "riskavg/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

#include "riskavg/bayes.hpp"
#include "riskavg/hilbert.hpp"
#include "riskavg/kernel_ball.hpp"
#include "riskavg/normal.hpp"
#include "riskavg/quadrature.hpp"
#include "riskavg/risk.hpp"
#include "riskavg/svg.hpp"

namespace riskavg {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024157652848110453;

using nlohmann::json;

std::vector<double> grid_of(const json& params) {
  return params.at("r_grid").get<std::vector<double>>();
}

bayes::BayesSetup setup_of(const json& params) {
  bayes::BayesSetup s;
  s.base = {params.at("mu_x").get<double>(), params.at("sigma_x").get<double>()};
  s.level = {params.at("level").get<double>()};
  s.lambda = params.at("lambda").get<double>();
  s.prior = bayes::NormalGammaPrior::centered(s.base, params.at("prior").at("k").get<double>(),
                                              params.at("prior").at("alpha_ng").get<double>());
  return s;
}

std::string stem_of(const ExperimentConfig& cfg) {
  return cfg.experiment + "-" + std::to_string(cfg.seed);
}

void attach_metadata(ResultTable& t, const ExperimentConfig& cfg) {
  t.set_metadata("config", cfg.echo().dump());
}

// Styles follow the dominance figure: base red dashed, averaging solid
// black, quantile aggregate dot-dashed blue, distribution aggregate dotted
// green, worst case dashed orange.
const SvgPlot::Style kBaseStyle{"#cc2222", "8,5", 1.6};
const SvgPlot::Style kAvgStyle{"#000000", "", 2.0};
const SvgPlot::Style kQaggStyle{"#2244cc", "10,4,2,4", 1.6};
const SvgPlot::Style kDaggStyle{"#118833", "2,4", 1.8};
const SvgPlot::Style kWcStyle{"#dd8800", "8,5", 1.6};

// (mu, sigma) prior draws as payoff points for the kernel-ball machinery.
BaseSampler prior_point_sampler(const bayes::NormalGammaPrior& prior) {
  return {[prior](CounterRng& rng) {
            double tau = rng.next_gamma(prior.alpha, prior.beta);
            double mu = prior.mu0 + rng.next_gaussian() / std::sqrt(prior.kk * tau);
            return Point{mu, 1.0 / std::sqrt(tau)};
          },
          false};
}

RiskEvaluator es_point_risk(EsLevel level) {
  double ca = es_tail_constant(level);
  return {[ca](const Point& p) { return -p[0] + ca * p[1]; }, std::sqrt(1.0 + ca * ca)};
}

RunOutput run_dominance(const ExperimentConfig& cfg) {
  bayes::BayesSetup s = setup_of(cfg.params);
  std::vector<double> grid = grid_of(cfg.params);
  auto rows = bayes::dominance_chain(s, grid, cfg.n_draws, cfg.seed);

  ResultTable t({"r", "rho_base", "rho_avg", "se_avg", "rho_qagg", "rho_dagg", "se_dagg",
                 "rho_wc", "acceptance_rate", "flags"});
  for (const auto& r : rows)
    t.add_row({ResultTable::fmt(r.r), ResultTable::fmt(r.rho_base), ResultTable::fmt(r.rho_avg),
               ResultTable::fmt(r.se_avg), ResultTable::fmt(r.rho_qagg),
               ResultTable::fmt(r.rho_dagg), ResultTable::fmt(r.se_dagg),
               ResultTable::fmt(r.rho_wc), ResultTable::fmt(r.acceptance_rate), r.flags});
  attach_metadata(t, cfg);

  RunOutput out{std::move(t), {}, ""};
  out.files.push_back(out.table.write(cfg.out_dir, stem_of(cfg)));
  if (cfg.plots) {
    SvgPlot plot("Dominance chain", "r", "risk");
    std::vector<double> xs, base, avg, qagg, dagg, wc;
    for (const auto& r : rows) {
      xs.push_back(r.r);
      base.push_back(r.rho_base);
      avg.push_back(r.rho_avg);
      qagg.push_back(r.rho_qagg);
      dagg.push_back(r.rho_dagg);
      wc.push_back(r.rho_wc);
    }
    plot.add_series("baseline ES", xs, base, kBaseStyle);
    plot.add_series("averaging", xs, avg, kAvgStyle);
    plot.add_series("quantile aggregate", xs, qagg, kQaggStyle);
    plot.add_series("distribution aggregate", xs, dagg, kDaggStyle);
    plot.add_series("worst case", xs, wc, kWcStyle);
    std::string p = (std::filesystem::path(cfg.out_dir) / (stem_of(cfg) + ".svg")).string();
    plot.write(p);
    out.files.push_back(p);
  }
  out.summary = "dominance: " + std::to_string(rows.size()) + " radii";
  return out;
}

RunOutput run_sensitivity(const ExperimentConfig& cfg) {
  const json& p = cfg.params;
  bayes::SensitivitySpec spec;
  spec.base = {p.at("mu_x").get<double>(), p.at("sigma_x").get<double>()};
  spec.level = {p.at("level").get<double>()};
  spec.r_grid = grid_of(p);
  spec.lambda_fixed = p.at("lambda_fixed").get<double>();
  for (const json& pr : p.at("priors"))
    spec.priors.emplace_back(pr[0].get<double>(), pr[1].get<double>());
  spec.prior_fixed = {p.at("prior_fixed")[0].get<double>(), p.at("prior_fixed")[1].get<double>()};
  spec.lambdas = p.at("lambdas").get<std::vector<double>>();

  auto rows = bayes::sensitivity_sweep(spec, cfg.n_draws, cfg.seed);

  ResultTable t({"panel", "alpha_ng", "k", "lambda", "r", "rho_avg", "se_avg", "acceptance_rate",
                 "large_r_limit", "flags"});
  for (const auto& r : rows)
    t.add_row({std::string(1, r.panel), ResultTable::fmt(r.alpha), ResultTable::fmt(r.k),
               ResultTable::fmt(r.lambda), ResultTable::fmt(r.r), ResultTable::fmt(r.estimate),
               ResultTable::fmt(r.se), ResultTable::fmt(r.acceptance_rate),
               ResultTable::fmt(r.large_r_limit), r.flags});
  attach_metadata(t, cfg);

  RunOutput out{std::move(t), {}, ""};
  out.files.push_back(out.table.write(cfg.out_dir, stem_of(cfg)));
  if (cfg.plots) {
    const double rho_base = es_gaussian(spec.base, spec.level);
    const char* palette[] = {"#000000", "#2244cc", "#118833", "#aa22aa", "#dd8800"};
    for (char panel : {'a', 'b'}) {
      SvgPlot plot(panel == 'a' ? "Sensitivity: prior concentration"
                                : "Sensitivity: kernel decay",
                   "r", "risk");
      std::vector<double> xs;
      for (double r : spec.r_grid) xs.push_back(r);
      plot.add_series("baseline ES", {xs.front(), xs.back()}, {rho_base, rho_base}, kBaseStyle);
      int ci = 0;
      // one curve per (prior, lambda) combination present in this panel
      for (std::size_t i = 0; i < rows.size();) {
        if (rows[i].panel != panel) {
          ++i;
          continue;
        }
        std::vector<double> ys, limit;
        char buf[96];
        std::snprintf(buf, sizeof(buf), "alpha=%g k=%g lambda=%g", rows[i].alpha, rows[i].k,
                      rows[i].lambda);
        double lim = rows[i].large_r_limit;
        std::size_t j = i;
        for (; j < rows.size() && rows[j].panel == panel && rows[j].alpha == rows[i].alpha &&
               rows[j].lambda == rows[i].lambda && rows[j].k == rows[i].k;
             ++j)
          ys.push_back(rows[j].estimate);
        const std::string color = palette[ci % 5];
        plot.add_series(buf, xs, ys, {color, "", 1.8});
        if (panel == 'a')
          plot.add_series("", {xs.front(), xs.back()}, {lim, lim}, {color, "2,4", 1.0});
        ++ci;
        i = j;
      }
      std::string path = (std::filesystem::path(cfg.out_dir) /
                          (stem_of(cfg) + "-panel-" + std::string(1, panel) + ".svg"))
                             .string();
      plot.write(path);
      out.files.push_back(path);
    }
  }
  out.summary = "sensitivity: " + std::to_string(rows.size()) + " rows";
  return out;
}

RunOutput run_hilbert_linear(const ExperimentConfig& cfg) {
  auto dims = cfg.params.at("dims").get<std::vector<int>>();
  auto grid = grid_of(cfg.params);

  ResultTable t({"n", "r", "closed_form", "mc_estimate", "mc_se", "acceptance_rate", "ball_prob",
                 "flags"});
  for (int n : dims) {
    for (double r : grid) {
      double cf = hilbert::rho_linear_finite_n(n, r);
      double ball_prob =
          chisq::noncentral_cdf({n, hilbert::TiltedGaussian::noncentrality}, 3.0 * r * r);
      std::string flags;
      double est = std::numeric_limits<double>::quiet_NaN(), se = est, acc = 0.0;
      try {
        McEstimate mc = hilbert::rho_linear_mc(n, r, cfg.n_draws, cfg.seed);
        est = mc.estimate;
        se = mc.std_error;
        acc = mc.acceptance_rate;
        if (mc.retained < kLowAcceptanceRetained) flags = "low_acceptance";
      } catch (const EmptyBallError& e) {
        acc = e.acceptance_rate();
        flags = "empty_ball";
      }
      t.add_row({ResultTable::fmt(std::uint64_t(n)), ResultTable::fmt(r), ResultTable::fmt(cf),
                 ResultTable::fmt(est), ResultTable::fmt(se), ResultTable::fmt(acc),
                 ResultTable::fmt(ball_prob), flags});
    }
  }
  attach_metadata(t, cfg);

  RunOutput out{std::move(t), {}, "hilbert-linear: closed form vs Monte Carlo"};
  out.files.push_back(out.table.write(cfg.out_dir, stem_of(cfg)));
  if (cfg.plots) {
    SvgPlot plot("Hilbert linear risk: closed form vs MC", "r", "rho");
    const char* palette[] = {"#000000", "#2244cc", "#118833", "#aa22aa"};
    int ci = 0;
    for (int n : dims) {
      std::vector<double> xs, cfv, mcv;
      for (double r : grid) {
        xs.push_back(r);
        cfv.push_back(hilbert::rho_linear_finite_n(n, r));
      }
      plot.add_series("n=" + std::to_string(n), xs, cfv, {palette[ci % 4], "", 1.8});
      ++ci;
    }
    std::string p = (std::filesystem::path(cfg.out_dir) / (stem_of(cfg) + ".svg")).string();
    plot.write(p);
    out.files.push_back(p);
  }
  return out;
}

RunOutput run_hilbert_quadratic(const ExperimentConfig& cfg) {
  auto dims = cfg.params.at("dims").get<std::vector<int>>();
  auto grid = grid_of(cfg.params);

  ResultTable t({"n", "r", "mean_term", "second_moment_mc", "second_moment_se", "assembled_mc",
                 "assembled_limit", "acceptance_rate", "flags"});
  for (int n : dims) {
    for (double r : grid) {
      std::string flags;
      double m = hilbert::conditional_mean_v1(n, r);
      double lim = hilbert::quadratic_limit_assembly(n, r);
      double sm = std::numeric_limits<double>::quiet_NaN(), sse = sm, asm_mc = sm, acc = 0.0;
      try {
        auto q = hilbert::rho_quadratic_components(n, r, cfg.n_draws, cfg.seed);
        sm = q.second_moment_term;
        sse = q.second_moment_se;
        asm_mc = q.assembled;
        acc = q.acceptance_rate;
      } catch (const EmptyBallError& e) {
        acc = e.acceptance_rate();
        flags = "empty_ball";
      }
      t.add_row({ResultTable::fmt(std::uint64_t(n)), ResultTable::fmt(r), ResultTable::fmt(m),
                 ResultTable::fmt(sm), ResultTable::fmt(sse), ResultTable::fmt(asm_mc),
                 ResultTable::fmt(lim), ResultTable::fmt(acc), flags});
    }
  }
  attach_metadata(t, cfg);
  RunOutput out{std::move(t), {}, "hilbert-quadratic: component decomposition"};
  out.files.push_back(out.table.write(cfg.out_dir, stem_of(cfg)));
  return out;
}

RunOutput run_chisq_verify(const ExperimentConfig& cfg) {
  const std::uint64_t n_triples = cfg.params.at("n_triples").get<std::uint64_t>();
  CounterRng rng(cfg.seed, 0);

  ResultTable t({"k", "lam", "x", "cdf", "quadrature", "gap"});
  double max_gap = 0.0;
  for (std::uint64_t i = 0; i < n_triples; ++i) {
    int k = 1 + static_cast<int>(rng.next_u64() % 12);
    double lam = 5.0 * rng.next_uniform();
    double x = 0.5 + 14.5 * rng.next_uniform();
    chisq::ChiSqParams p{k, lam};
    double cdf = chisq::noncentral_cdf(p, x);
    double quad = noncentral_cdf_by_quadrature(p, x);
    double gap = std::fabs(cdf - quad);
    max_gap = std::max(max_gap, gap);
    t.add_row({ResultTable::fmt(std::uint64_t(k)), ResultTable::fmt(lam), ResultTable::fmt(x),
               ResultTable::fmt(cdf), ResultTable::fmt(quad), ResultTable::fmt(gap)});
  }
  attach_metadata(t, cfg);
  RunOutput out{std::move(t), {}, "chisq-verify: max |gap| = " + ResultTable::fmt(max_gap)};
  out.files.push_back(out.table.write(cfg.out_dir, stem_of(cfg)));
  return out;
}

void sweep_table(ResultTable& t, const std::vector<SweepRow>& rows) {
  for (const SweepRow& row : rows) {
    if (row.estimate) {
      t.add_row({ResultTable::fmt(row.r), ResultTable::fmt(row.estimate->estimate),
                 ResultTable::fmt(row.estimate->std_error),
                 ResultTable::fmt(row.estimate->acceptance_rate), row.flag});
    } else {
      t.add_row({ResultTable::fmt(row.r), "nan", "nan", "0", row.flag});
    }
  }
}

RunOutput sweep_output(const ExperimentConfig& cfg, const std::vector<SweepRow>& rows,
                       const std::string& title) {
  ResultTable t({"r", "estimate", "std_error", "acceptance_rate", "flags"});
  sweep_table(t, rows);
  attach_metadata(t, cfg);
  RunOutput out{std::move(t), {}, title + ": " + std::to_string(rows.size()) + " radii"};
  out.files.push_back(out.table.write(cfg.out_dir, stem_of(cfg)));
  if (cfg.plots) {
    SvgPlot plot(title, "r", "estimate");
    std::vector<double> xs, ys;
    for (const SweepRow& row : rows) {
      xs.push_back(row.r);
      ys.push_back(row.estimate ? row.estimate->estimate
                                : std::numeric_limits<double>::quiet_NaN());
    }
    plot.add_series("averaging estimate", xs, ys, kAvgStyle);
    std::string p = (std::filesystem::path(cfg.out_dir) / (stem_of(cfg) + ".svg")).string();
    plot.write(p);
    out.files.push_back(p);
  }
  return out;
}

RunOutput run_radius_sweep(const ExperimentConfig& cfg) {
  bayes::BayesSetup s = setup_of(cfg.params);
  std::vector<double> grid = grid_of(cfg.params);
  BaseSampler sampler = prior_point_sampler(s.prior);
  RiskEvaluator rho = es_point_risk(s.level);
  Point center{s.base.mean, s.base.stddev};
  KernelSpec kernel = KernelSpec::gaussian_exp(s.lambda);
  // same seed for every radius: common random numbers across the grid
  auto engine = [&](double r) {
    return avg_risk_mc(sampler, BallSpec{euclidean_metric(), center, r}, kernel, rho,
                       cfg.n_draws, cfg.seed);
  };
  return sweep_output(cfg, radius_sweep(engine, grid), "Averaging measure radius sweep");
}

RunOutput run_counterexample(const ExperimentConfig& cfg) {
  // 2-D standard Gaussian base, uniform kernel, rho(z) = -z_1, X = (-1, 0):
  // the sweep moves from about 1 at small r to 0 at large r, so the curve
  // cannot be globally increasing in r.
  std::vector<double> grid = grid_of(cfg.params);
  BaseSampler sampler = hilbert::standard_sampler(2);
  Point center{-1.0, 0.0};
  auto engine = [&](double r) {
    return avg_risk_mc(sampler, BallSpec{euclidean_metric(), center, r}, KernelSpec::uniform(),
                       coordinate_risk(0), cfg.n_draws, cfg.seed);
  };
  return sweep_output(cfg, radius_sweep(engine, grid), "Non-monotone radius counterexample");
}

}  // namespace

double noncentral_cdf_by_quadrature(const chisq::ChiSqParams& p, double x, double tol) {
  p.validate();
  if (!(x >= 0.0)) throw std::domain_error("noncentral_cdf_by_quadrature: x must be >= 0");
  if (x == 0.0) return 0.0;
  auto integrand = [&](double u) {
    if (u == 0.0) {
      // 2u f(u^2) -> 2 e^{-lam/2} / sqrt(2 pi) for one degree of freedom, else 0
      return p.dof == 1 ? 2.0 * std::exp(-0.5 * p.noncentrality) / kSqrt2Pi : 0.0;
    }
    return 2.0 * u * chisq::noncentral_pdf(p, u * u);
  };
  return adaptive_simpson(integrand, 0.0, std::sqrt(x), tol);
}

RunOutput run_experiment(const ExperimentConfig& cfg) {
  if (cfg.experiment == "dominance") return run_dominance(cfg);
  if (cfg.experiment == "sensitivity") return run_sensitivity(cfg);
  if (cfg.experiment == "hilbert-linear") return run_hilbert_linear(cfg);
  if (cfg.experiment == "hilbert-quadratic") return run_hilbert_quadratic(cfg);
  if (cfg.experiment == "chisq-verify") return run_chisq_verify(cfg);
  if (cfg.experiment == "radius-sweep") return run_radius_sweep(cfg);
  if (cfg.experiment == "counterexample") return run_counterexample(cfg);
  throw ConfigError("$.experiment", "unknown experiment id '" + cfg.experiment + "'");
}

}  // namespace riskavg
