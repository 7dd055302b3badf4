#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "riskavg/risk.hpp"
#include "riskavg/rng.hpp"

namespace riskavg {

using Metric = std::function<double(const Point&, const Point&)>;
Metric euclidean_metric();

/// Decreasing distance weight. The gaussian-exponential form is
/// exp(-decay * t^2); uniform is its decay = 0 degenerate case.
struct KernelSpec {
  enum class Form { gaussian_exponential, uniform, custom };
  Form form = Form::uniform;
  double decay = 0.0;
  std::function<double(double)> custom;

  static KernelSpec gaussian_exp(double decay);
  static KernelSpec uniform();
  static KernelSpec from_function(std::function<double(double)> fn);
};

/// Weight at distance t; t must be nonnegative and the weight is maximal at 0.
double kernel_weight(const KernelSpec& k, double t);

struct BallSpec {
  Metric metric;
  Point center;
  double radius = 0.0;
  void validate() const;
};

/// Discretized averaging measure: points with normalized kernel weights.
struct WeightedCloud {
  std::vector<Point> points;
  std::vector<double> weights;
};

/// Empty effective support: no mass inside the ball (or the kernel mass
/// underflowed). Recoverable by construction; radius sweeps flag the row
/// instead of aborting. Carries the acceptance rate observed (0 for the
/// structural case).
class EmptyBallError : public std::runtime_error {
 public:
  explicit EmptyBallError(double acceptance_rate)
      : std::runtime_error("empty ball: no effective support"), acceptance_rate_(acceptance_rate) {}
  double acceptance_rate() const { return acceptance_rate_; }

 private:
  double acceptance_rate_;
};

// Kernel mass sums below this are treated as structurally empty rather than
// as a usable normalizer.
inline constexpr double kWeightSumFloor = 1e-300;

struct Atom {
  Point location;
  double mass;
};

/// Builds the translated symmetric cloud p0*delta_X + sum p_i (delta_{X+Z_i} + delta_{X-Z_i}).
std::vector<Atom> symmetric_translated_atoms(const Point& center, std::span<const Point> offsets,
                                             double p0, std::span<const double> p);

struct DiscreteAverage {
  double value;
  WeightedCloud cloud;
};

/// Exact discrete averaging: sum_i a_i 1_ball phi(d_i) rho(Z_i) / sum_i a_i 1_ball phi(d_i).
DiscreteAverage avg_risk_discrete(std::span<const Atom> atoms, const BallSpec& ball,
                                  const KernelSpec& kernel, const RiskEvaluator& rho);

/// Seeded i.i.d. generator for the base measure gamma_X. When
/// translation_of_symmetric is set the sampler asserts gamma_X(A) = gamma_0(A - X)
/// with symmetric gamma_0 (checked on sample moments by the test suite).
struct BaseSampler {
  std::function<Point(CounterRng&)> draw;
  bool translation_of_symmetric = false;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double acceptance_rate = 0.0;
  std::uint64_t retained = 0;
  double sup_rho = 0.0;  // max rho over retained draws; the estimate never exceeds it
};

/// Self-normalized importance estimate of the ball average
///   sum w_i rho(Z_i) / sum w_i,  w_i = 1_ball(Z_i) phi(d(X, Z_i)),
/// with the delta-method standard error of the ratio. Draw i of chunk c is a
/// pure function of (seed, c, i): chunk boundaries are fixed at 2^16 draws, so
/// the result does not depend on scheduling.
McEstimate avg_risk_mc(const BaseSampler& sampler, const BallSpec& ball, const KernelSpec& kernel,
                       const RiskEvaluator& rho, std::uint64_t n_draws, std::uint64_t seed);

/// Ball-free tilted average sum phi(d) rho / sum phi(d); the r -> infinity limit.
struct TiltedAverage {
  double estimate;
  double std_error;
};
TiltedAverage large_r_limit_mc(const BaseSampler& sampler, const Point& center,
                               const Metric& metric, const KernelSpec& kernel,
                               const RiskEvaluator& rho, std::uint64_t n_draws,
                               std::uint64_t seed);

/// One row of a radius sweep; empty-ball rows carry a flag instead of an estimate.
struct SweepRow {
  double r = 0.0;
  std::optional<McEstimate> estimate;
  std::string flag;  // "", "low_acceptance", "empty_ball"
};

// Rows with fewer retained draws than this are flagged low_acceptance.
inline constexpr std::uint64_t kLowAcceptanceRetained = 100;

/// Evaluates engine(r) over a sorted nonnegative grid. The engine is expected
/// to reuse one underlying random stream across radii (common random numbers)
/// so the resulting curve is smooth in r.
std::vector<SweepRow> radius_sweep(const std::function<McEstimate(double)>& engine,
                                   std::span<const double> grid);

/// Evaluates the same functional under kernel decay lambda and lambda + delta
/// on one stream; continuity of the averaging in the kernel means the gap
/// vanishes with delta. A uniform kernel perturbs to gaussian-exponential
/// with decay = delta.
struct PerturbationCheck {
  double base;
  double perturbed;
  double gap;
};
PerturbationCheck perturbation_continuity_check(const KernelSpec& k, double delta,
                                                const std::function<double(const KernelSpec&)>& engine);

}  // namespace riskavg
