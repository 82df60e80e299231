#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gauss_extremes/grid.hpp"
#include "gauss_extremes/sampler.hpp"
#include "gauss_extremes/trend.hpp"

namespace gex {

// direct:        mean of sup_t exp(sqrt(2a) B(t) - a|t|^alpha - f(t)).
// shift_average: unbiased for the same grid quantity. An anchor tau is
//                drawn on the grid with weight e^{-f(tau)}, the fBm is
//                re-anchored at tau, and the replication contributes
//                Z * exp(max V - logsumexp V), Z = sum e^{-f}. The
//                contribution is bounded by Z, so the variance stays finite
//                on long intervals where the direct mean is driven by rare
//                paths.
enum class Estimator { direct, shift_average };

std::string to_string(Estimator e);

struct EstimatorOptions {
  Estimator estimator = Estimator::shift_average;
  SamplerOptions sampler{};
  // piterbarg_estimate also evaluates the 2h and 4h views of the same paths
  // and removes the grid bias by Aitken extrapolation when the differences
  // are resolved (otherwise the h value is kept).
  bool grid_extrapolation = false;
};

struct LevelPoint {
  double horizon;
  double value;
  double std_error;
};

struct ConstantEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
  double grid_step = 0.0;
  double S = 0.0;
  double T = 0.0;
  bool extrapolated = false;       // limit in T fitted from the schedule
  bool grid_extrapolated = false;  // grid bias removed from nested views
  Estimator estimator = Estimator::shift_average;
  std::uint64_t seed = 0;
  std::vector<LevelPoint> trajectory;  // schedule values for the limit estimators
};

// 1/512, coarsened so that [S, T] carries at most 4096 nodes.
double default_grid_step(double S, double T);

// Per-replication evaluator on one lattice [S, T] (nodes k h). `views`
// lists decimation factors q; view q keeps the nodes whose lattice index is
// a multiple of q, so every view contains 0 when the interval does. All
// views share one simulated path (common random numbers); with the shift
// estimator the anchor set is the coarsest view, which keeps every view an
// unbiased estimator of its own grid quantity.
class PiterbargKernel {
 public:
  PiterbargKernel(double alpha, double a, TrendFunction f, double S, double T, double grid_step,
                  EstimatorOptions options = {}, std::vector<std::size_t> views = {1});

  const Grid& grid() const noexcept { return grid_; }
  std::size_t view_count() const noexcept { return views_.size(); }
  double grid_step() const noexcept { return step_; }

  struct Workspace {
    PathSampler::Workspace sampler;
    std::vector<double> path;
    std::vector<double> v;
  };
  Workspace make_workspace() const;

  // out[k] = contribution of replication `rep` for view k.
  void evaluate(std::uint64_t seed, std::uint64_t rep, Workspace& ws, std::span<double> out) const;

 private:
  double alpha_;
  double a_;
  double step_;
  Estimator estimator_;
  Grid grid_;
  PathSampler sampler_;
  std::vector<std::size_t> views_;
  std::vector<std::vector<std::uint32_t>> members_;  // node indices per view
  std::vector<double> neg_f_;                        // -f(t_i)
  std::vector<double> drift_;                        // -a|t_i|^alpha - f(t_i)
  std::vector<double> lag_cost_;                     // a (d h)^alpha
  std::vector<std::uint32_t> anchors_;               // coarsest view
  std::vector<double> anchor_cdf_;
  double log_z_ = 0.0;
};

// Mean / covariance of several per-replication statistics over n reps.
struct MomentSummary {
  std::uint64_t n = 0;
  std::vector<double> mean;
  std::vector<double> cov;  // row-major k x k covariance of one replication

  double variance_of_mean(std::span<const double> weights) const;
};

MomentSummary run_kernels(std::span<const PiterbargKernel* const> kernels, std::uint64_t n, std::uint64_t seed);

ConstantEstimate piterbarg_estimate(double alpha, double a, const TrendFunction& f, double S, double T,
                                    double grid_step, std::uint64_t n, std::uint64_t seed,
                                    EstimatorOptions options = {});

// Estimates on nested grids h * factors[k] from one set of paths.
std::vector<ConstantEstimate> piterbarg_estimate_nested(double alpha, double a, const TrendFunction& f, double S,
                                                        double T, double finest_step,
                                                        std::vector<std::size_t> factors, std::uint64_t n,
                                                        std::uint64_t seed, EstimatorOptions options = {});

ConstantEstimate pickands_estimate(double alpha, double T, double grid_step, std::uint64_t n, std::uint64_t seed,
                                   EstimatorOptions options = {});

// H_alpha from H_alpha[0,T]/T ~ H + A/T, least squares over the schedule.
// All horizons are simulated inside the same replication loop, so the
// reported standard error is that of the fitted intercept.
ConstantEstimate pickands_limit(double alpha, double grid_step, std::uint64_t n, std::uint64_t seed,
                                std::span<const double> schedule, EstimatorOptions options = {});

// P^f_{alpha,a}[S, infinity) by growing the right end along the schedule
// (both ends, [-T, T], when S is -infinity). Stops once successive values
// differ by less than tol * value + 2 combined standard errors; with three
// or more levels an exponential tail v - A e^{-kappa T} is fitted and used
// when it is well determined. Throws ScheduleExhausted otherwise.
ConstantEstimate piterbarg_limit(double alpha, double a, const TrendFunction& f, double S, double grid_step,
                                 std::uint64_t n, std::uint64_t seed, std::span<const double> schedule, double tol,
                                 EstimatorOptions options = {});

struct ExpTailFit {
  bool ok = false;
  double limit = 0.0;
  double kappa = 0.0;
};

// Fit v(T) = L - A e^{-kappa T} through three points.
ExpTailFit fit_exponential_tail(std::span<const double> horizons, std::span<const double> values);

}  // namespace gex
