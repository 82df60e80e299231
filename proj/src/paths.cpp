#include "gauss_extremes/paths.hpp"

#include <algorithm>
#include <limits>

#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/parallel.hpp"

namespace gex {

PathBatch sample_paths(const CorrelationModel& model, const Grid& grid, std::size_t n, std::uint64_t seed,
                       SamplerOptions options) {
  return sample_paths(PathSampler(model, grid, options), n, seed);
}

PathBatch sample_paths(const PathSampler& sampler, std::size_t n, std::uint64_t seed) {
  const std::size_t m = sampler.grid().size();
  PathBatch batch{sampler.grid(), n, seed, std::vector<double>(n * m)};
  double* base = batch.values.data();
  parallel_for(
      n, [&] { return sampler.make_workspace(); },
      [&](std::uint64_t rep, PathSampler::Workspace& ws) {
        sampler.sample(seed, rep, std::span<double>(base + rep * m, m), ws);
      });
  return batch;
}

double drifted_sup(std::span<const double> path, std::span<const double> trend) {
  if (path.size() != trend.size()) throw PreconditionError("trend length must equal grid length");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < path.size(); ++j) best = std::max(best, path[j] + trend[j]);
  return best;
}

std::vector<double> drifted_sup(const PathBatch& batch, std::span<const double> trend) {
  if (trend.size() != batch.grid.size()) throw PreconditionError("trend length must equal grid length");
  std::vector<double> out(batch.n);
  for (std::size_t i = 0; i < batch.n; ++i) out[i] = drifted_sup(batch.row(i), trend);
  return out;
}

}  // namespace gex
