#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gauss_extremes/correlation.hpp"
#include "gauss_extremes/exceedance.hpp"
#include "gauss_extremes/grid.hpp"
#include "gauss_extremes/pickands.hpp"
#include "gauss_extremes/trend.hpp"

// Plain single-threaded versions of the hot loops, always on the dense
// Cholesky factor. They draw the same substreams as the parallel code with
// SamplerOptions{.force_dense = true}, so results agree bit for bit.
namespace gex::reference {

std::vector<double> sample_paths(const CorrelationModel& model, const Grid& grid, std::size_t n, std::uint64_t seed);

MCEstimate mc_sup_prob(const CorrelationModel& model, std::span<const double> trend, double u, const Grid& grid,
                       std::uint64_t n, std::uint64_t seed);

// Direct estimator mean of sup exp(sqrt(2a) B - a|t|^alpha - f) on the
// lattice [S, T] with step h.
ConstantEstimate piterbarg_direct(double alpha, double a, const TrendFunction& f, double S, double T, double h,
                                  std::uint64_t n, std::uint64_t seed);

}  // namespace gex::reference
