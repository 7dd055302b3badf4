#pragma once

#include <string>
#include <vector>

#include "riskavg/chisq.hpp"
#include "riskavg/config.hpp"
#include "riskavg/table.hpp"

namespace riskavg {

struct RunOutput {
  ResultTable table;
  std::vector<std::string> files;  // paths written (csv, meta, svg)
  std::string summary;             // one-line result digest for the console
};

/// Dispatches a validated config to the owning module, writes
/// <out_dir>/<experiment>-<seed>.csv (+ a meta sidecar, + SVG panels when
/// plots are enabled) and returns the table.
RunOutput run_experiment(const ExperimentConfig& cfg);

/// Quadrature oracle for the chisq-verify experiment: integrates the
/// noncentral density (Poisson mixture of central densities) with adaptive
/// Simpson under the substitution x = u^2, a route independent of the
/// incomplete-gamma cdf evaluation it is compared against.
double noncentral_cdf_by_quadrature(const chisq::ChiSqParams& p, double x, double tol = 1e-12);

}  // namespace riskavg
