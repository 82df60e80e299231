#include "gauss_extremes/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/rng.hpp"
#include "gauss_extremes/sampler.hpp"

namespace gex::reference {

namespace {

std::vector<double> factor(const CorrelationModel& model, const Grid& grid) {
  const auto cov =
      model.kind() == ModelKind::custom_covariance ? model.custom_matrix() : covariance_matrix(model, grid);
  return cholesky_with_jitter(cov, grid.size());
}

void draw(const std::vector<double>& l, std::size_t m, std::uint64_t seed, std::uint64_t rep, std::vector<double>& z,
          double* out) {
  Engine engine = substream(seed, rep);
  NormalSource normal(engine);
  normal.fill(z);
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += l[i * m + j] * z[j];
    out[i] = acc;
  }
}

}  // namespace

std::vector<double> sample_paths(const CorrelationModel& model, const Grid& grid, std::size_t n, std::uint64_t seed) {
  const std::size_t m = grid.size();
  const auto l = factor(model, grid);
  std::vector<double> values(n * m);
  std::vector<double> z(m);
  for (std::size_t r = 0; r < n; ++r) draw(l, m, seed, r, z, values.data() + r * m);
  return values;
}

MCEstimate mc_sup_prob(const CorrelationModel& model, std::span<const double> trend, double u, const Grid& grid,
                       std::uint64_t n, std::uint64_t seed) {
  const std::size_t m = grid.size();
  if (trend.size() != m) throw PreconditionError("trend length must equal grid length");
  const auto l = factor(model, grid);
  std::vector<double> z(m), path(m);
  std::uint64_t events = 0;
  for (std::uint64_t r = 0; r < n; ++r) {
    draw(l, m, seed, r, z, path.data());
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) sup = std::max(sup, path[j] + trend[j]);
    if (sup > u) ++events;
  }
  double h = grid.step();
  if (h <= 0.0) h = grid.uniform_step().value_or(0.0);
  return make_estimate(events, n, h, seed);
}

ConstantEstimate piterbarg_direct(double alpha, double a, const TrendFunction& f, double S, double T, double h,
                                  std::uint64_t n, std::uint64_t seed) {
  const Grid grid = Grid::lattice(S, T, h);
  const std::size_t m = grid.size();
  const auto l = factor(CorrelationModel::fbm(alpha), grid);
  std::vector<double> drift(m);
  for (std::size_t j = 0; j < m; ++j) drift[j] = -a * std::pow(std::abs(grid[j]), alpha) - f(grid[j]);
  const double scale = std::sqrt(2.0 * a);

  std::vector<double> z(m), path(m);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t r = 0; r < n; ++r) {
    draw(l, m, seed, r, z, path.data());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) best = std::max(best, scale * path[j] + drift[j]);
    const double x = std::exp(best);
    sum += x;
    sum_sq += x * x;
  }
  const double nn = static_cast<double>(n);
  ConstantEstimate e;
  e.value = sum / nn;
  e.std_error = n > 1 ? std::sqrt(std::max(sum_sq / nn - e.value * e.value, 0.0) / (nn - 1.0)) : 0.0;
  e.n = n;
  e.grid_step = h;
  e.S = S;
  e.T = T;
  e.estimator = Estimator::direct;
  e.seed = seed;
  return e;
}

}  // namespace gex::reference
