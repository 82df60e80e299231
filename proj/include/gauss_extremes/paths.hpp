#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gauss_extremes/correlation.hpp"
#include "gauss_extremes/grid.hpp"
#include "gauss_extremes/sampler.hpp"

namespace gex {

// n replications on one grid, stored row-major (row = replication).
struct PathBatch {
  Grid grid;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * grid.size(), grid.size()}; }
};

PathBatch sample_paths(const CorrelationModel& model, const Grid& grid, std::size_t n, std::uint64_t seed,
                       SamplerOptions options = {});

// Same batch through an already constructed sampler.
PathBatch sample_paths(const PathSampler& sampler, std::size_t n, std::uint64_t seed);

// max_j (path_ij + trend_j) for every replication i.
std::vector<double> drifted_sup(const PathBatch& batch, std::span<const double> trend);

// Single-path version used by the streaming estimators.
double drifted_sup(std::span<const double> path, std::span<const double> trend);

}  // namespace gex
