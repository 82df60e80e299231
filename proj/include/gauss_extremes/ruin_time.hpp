#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gauss_extremes/asymptotics.hpp"
#include "gauss_extremes/correlation.hpp"
#include "gauss_extremes/grid.hpp"
#include "gauss_extremes/sampler.hpp"

namespace gex {

// Limit law of u^{1/gamma}(tau_u - t0) given tau_u <= T for a locally
// stationary process with one trend peak. For t0 in [0, T) the admissible
// range is x > upsilon; for t0 = T it is x < 0.
double cond_passage_cdf_locstat(double x, double alpha, double gamma, double a, double c, T0Position position,
                                const ConstantsProvider& provider, double tie_tol = kTieTol);

// Limit law of u^{2/beta*}(tau_u - t0) for the non-stationary case, f as in
// nonstationary_f. The Piterbarg branch uses sigma^{-2} a, matching C0.
double cond_passage_cdf_nonstat(double x, const RegimeParams& p, const ConstantsProvider& provider);

// Limit law of u^lambda (tau_u - t_u) for x in [x1, x2]. sigma0 != 1
// rescales f and eta by sigma0^{-2} as in the constant C.
double cond_passage_cdf_general(double x, EtaTag tag, double alpha, double eta, const TrendFunction& f, double x1,
                                double x2, const ConstantsProvider& provider, double sigma0 = 1.0);

// Brownian bridge with trend -c t: Phi(4x), or Phi(4x)/Phi(c) on x <= c/4
// for the horizon 1/2.
double bridge_drift_passage_cdf(double x, double c, bool half_horizon, const ConstantsProvider& provider);

// Ruin model: P^h[-r^2, x] / P^h[-r^2, inf) for x > -r^2.
double ruin_passage_cdf(double x, double c, double delta, double sigma, const ConstantsProvider& provider);

// u^2 (e^{-2 delta tau} - (c/(delta u + c))^2).
double ruin_passage_rescale(double tau, double u, double c, double delta);

struct CdfBand {
  double p;
  double lo;
  double hi;
};

// 95% Wilson score interval for k successes out of n.
CdfBand wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.959963984540054);

struct EmpiricalCdf {
  std::vector<double> support;          // sorted distinct rescaled passage times
  std::vector<std::uint64_t> cumulative;  // events with value <= support[k]
  std::uint64_t events = 0;
  std::uint64_t n = 0;

  double at(double x) const;
  CdfBand band(double x) const;
};

struct PassageOptions {
  // Scan the grid from its right end; used when grid order is the reverse
  // of physical time (the time-changed risk model).
  bool reverse_time = false;
  std::uint64_t min_events = 100;
};

// Among replications whose grid supremum of path + trend exceeds u, the
// first exceedance time t is mapped through `rescale` and collected.
EmpiricalCdf mc_conditional_passage(const PathSampler& sampler, std::span<const double> trend, double u,
                                    std::uint64_t n, std::uint64_t seed,
                                    const std::function<double(double)>& rescale, PassageOptions options = {});

EmpiricalCdf mc_conditional_passage(const CorrelationModel& model, std::span<const double> trend, double u,
                                    const Grid& grid, std::uint64_t n, std::uint64_t seed,
                                    const std::function<double(double)>& rescale, PassageOptions options = {});

// Exact P(u (tau_u - t_u) <= x | tau_u <= 1) for the Brownian bridge with
// trend -c t, t_u = u/(c + 2u), from the first-passage density of the
// bridge to the line u + c t.
double bridge_drift_passage_exact(double x, double u, double c);

}  // namespace gex
