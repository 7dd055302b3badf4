#pragma once

#include <functional>
#include <vector>

namespace riskavg {

/// Tanh-sinh (double exponential) quadrature over a finite interval.
/// Nodes cluster doubly-exponentially at both endpoints, so integrable
/// endpoint singularities (log- or power-type) converge cleanly.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, int max_level = 12);

/// Node/weight pairs of the tanh-sinh rule on (a,b) at a fixed level,
/// for callers that reuse one grid against many integrands.
struct QuadNode {
  double x;
  double w;
};
std::vector<QuadNode> tanh_sinh_nodes(double a, double b, int level = 9);

/// Classic adaptive Simpson with Richardson correction.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 40);

}  // namespace riskavg
