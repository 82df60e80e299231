#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gauss_extremes/correlation.hpp"
#include "gauss_extremes/fgn.hpp"
#include "gauss_extremes/grid.hpp"

namespace gex {

enum class SamplerMethod {
  dense_cholesky,       // generic: L z with L the (jittered) Cholesky factor
  independent_walk,     // fbm(alpha = 1), any grid
  random_line,          // fbm(alpha = 2), any grid
  fgn_lattice,          // fbm on a lattice grid, circulant fGn
  bridge_walk,          // brownian_bridge, B(t) - t B(1)
  reversed_walk,        // risk_time_change, sqrt(scale) W(1 - s)
  stationary_circulant  // stationary_power on a uniform grid
};

std::string to_string(SamplerMethod method);

struct SamplerOptions {
  // Always use the dense factorization; this is the reference path.
  bool force_dense = false;
};

// Lower-triangular Cholesky factor (row-major) of a covariance matrix.
// On failure the diagonal is jittered by 1e-12 * max diagonal and the
// factorization retried once; a second failure throws NonPositiveDefinite
// carrying the most negative eigenvalue of the input.
std::vector<double> cholesky_with_jitter(std::span<const double> cov, std::size_t m, bool* jittered = nullptr);

// Exact sampler of the model's finite-dimensional law on a grid. Immutable
// and cheap to copy; replication `rep` under master seed `seed` is a pure
// function of (model, grid, seed, rep).
class PathSampler {
 public:
  PathSampler(CorrelationModel model, Grid grid, SamplerOptions options = {});

  const CorrelationModel& model() const noexcept { return model_; }
  const Grid& grid() const noexcept { return grid_; }
  SamplerMethod method() const noexcept { return method_; }
  bool jittered() const noexcept { return jittered_; }

  struct Workspace {
    std::vector<double> scratch;
    std::optional<FgnGenerator::Workspace> fgn;
    std::optional<CirculantWorkspace> circulant;
  };
  Workspace make_workspace() const;

  void sample(std::uint64_t seed, std::uint64_t rep, std::span<double> out, Workspace& ws) const;

 private:
  void sample_dense(std::uint64_t seed, std::uint64_t rep, std::span<double> out, Workspace& ws) const;

  CorrelationModel model_;
  Grid grid_;
  SamplerMethod method_;
  bool jittered_ = false;

  std::shared_ptr<const std::vector<double>> factor_;  // dense_cholesky
  std::optional<FgnGenerator> fgn_;                    // fgn_lattice
  long long lattice_first_ = 0;                        // fgn_lattice: grid[0] / h
  long long lattice_lo_ = 0;                           // min(first, 0)
  std::optional<CirculantSampler> stationary_;         // stationary_circulant
};

}  // namespace gex
