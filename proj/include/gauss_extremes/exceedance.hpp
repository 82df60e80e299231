#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gauss_extremes/correlation.hpp"
#include "gauss_extremes/grid.hpp"
#include "gauss_extremes/sampler.hpp"

namespace gex {

struct MCEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;  // sqrt(p (1 - p) / n)
  std::uint64_t n = 0;
  double grid_step = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t events = 0;
};

MCEstimate make_estimate(std::uint64_t events, std::uint64_t n, double grid_step, std::uint64_t seed);

// P(max_j X(t_j) + g_j > u) on the grid.
MCEstimate mc_sup_prob(const CorrelationModel& model, std::span<const double> trend, double u, const Grid& grid,
                       std::uint64_t n, std::uint64_t seed, SamplerOptions options = {});
MCEstimate mc_sup_prob(const PathSampler& sampler, std::span<const double> trend, double u, std::uint64_t n,
                       std::uint64_t seed);

// One simulation on the sampler's grid, evaluated for every threshold in
// `levels` and on every decimation factor in `factors` (factor q keeps the
// nodes whose index is a multiple of q). result[k][i] belongs to factors[k]
// and levels[i]; grid_step is the nominal step times the factor.
std::vector<std::vector<MCEstimate>> mc_sup_table(const PathSampler& sampler, std::span<const double> trend,
                                                  std::span<const double> levels,
                                                  std::span<const std::size_t> factors, std::uint64_t n,
                                                  std::uint64_t seed);

struct Extrapolated {
  MCEstimate estimate;        // p0 and its propagated standard error
  bool bias_resolved = false;  // false: finest estimate returned unchanged
  double kappa = std::numeric_limits<double>::quiet_NaN();
  double bias = 0.0;           // p0 - finest p_hat
  std::string note;
};

// p(h) = p0 - A h^kappa through the three finest nested estimates (steps in
// ratio 2, same seed and n; the events of a coarse grid are contained in
// those of a finer one). Differences smaller than two standard errors, or a
// ratio of differences outside (0, 1), leave the bias unresolved.
Extrapolated refine_extrapolate(std::span<const MCEstimate> estimates);

struct ValidationRow {
  double u = 0.0;
  MCEstimate mc;
  double asymptotic = 0.0;
  std::optional<double> exact;
  double ratio = 0.0;  // reference / mc
  double ratio_lo = 0.0;
  double ratio_hi = 0.0;
  double ratio_se = 0.0;
};

enum class ValidationReference { asymptotic, exact };

struct ValidationReport {
  std::vector<ValidationRow> rows;
  ValidationReference reference = ValidationReference::asymptotic;
  bool monotone = false;
  bool final_close = false;
  bool pass = false;
};

inline constexpr double kMinEvents = 50.0;
inline constexpr double kFinalRatioTol = 0.1;

// Ratio table over an increasing u schedule. The pass flag requires the
// distance |ratio - 1| to be nonincreasing along the schedule (slack of two
// standard errors) and the last ratio within max(0.1, 3 se) of 1. With
// reference = exact the ratios are taken against `exact` instead.
ValidationReport asymptotic_validation(const std::function<double(double)>& asymptotic,
                                       const std::function<MCEstimate(double)>& mc,
                                       std::span<const double> u_schedule,
                                       const std::function<double(double)>& exact = {},
                                       ValidationReference reference = ValidationReference::asymptotic);

// Brownian risk model with constant force of interest after the time change
// s = exp(-2 delta t): X has covariance sigma^2/(2 delta) (1 - max(s, s')) on
// (0, 1], trend -(c/delta)(1 - sqrt(s)), and ruin is sup(X + trend) > u.
Grid ruin_grid(double first = 1e-6, double ratio = 1.1, double max_step = 1.0 / 4096.0);
std::vector<double> ruin_trend(const Grid& grid, double c, double delta);

}  // namespace gex
