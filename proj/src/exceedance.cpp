#include "gauss_extremes/exceedance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "gauss_extremes/aitken.hpp"
#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/parallel.hpp"

namespace gex {

MCEstimate make_estimate(std::uint64_t events, std::uint64_t n, double grid_step, std::uint64_t seed) {
  MCEstimate e;
  e.n = n;
  e.events = events;
  e.grid_step = grid_step;
  e.seed = seed;
  e.p_hat = n == 0 ? 0.0 : static_cast<double>(events) / static_cast<double>(n);
  e.std_error = n == 0 ? 0.0 : std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n));
  return e;
}

namespace {

double nominal_step(const Grid& grid) {
  if (grid.step() > 0.0) return grid.step();
  if (auto h = grid.uniform_step()) return *h;
  return 0.0;
}

}  // namespace

std::vector<std::vector<MCEstimate>> mc_sup_table(const PathSampler& sampler, std::span<const double> trend,
                                                  std::span<const double> levels,
                                                  std::span<const std::size_t> factors, std::uint64_t n,
                                                  std::uint64_t seed) {
  const Grid& grid = sampler.grid();
  const std::size_t m = grid.size();
  if (trend.size() != m) throw PreconditionError("trend length must equal grid length");
  if (n < 1) throw PreconditionError("n must be >= 1");
  if (factors.empty() || levels.empty()) throw PreconditionError("need at least one factor and one level");
  for (auto q : factors)
    if (q < 1) throw PreconditionError("decimation factors must be >= 1");

  const std::size_t nf = factors.size();
  const std::size_t nl = levels.size();
  struct State {
    PathSampler::Workspace ws;
    std::vector<double> path;
  };
  using Counts = std::vector<std::uint64_t>;
  const Counts counts = block_reduce(
      n, Counts(nf * nl, 0),
      [&] { return State{sampler.make_workspace(), std::vector<double>(m)}; },
      [&](std::uint64_t rep, Counts& acc, State& st) {
        sampler.sample(seed, rep, st.path, st.ws);
        for (std::size_t j = 0; j < m; ++j) st.path[j] += trend[j];
        for (std::size_t k = 0; k < nf; ++k) {
          double sup = -std::numeric_limits<double>::infinity();
          for (std::size_t j = 0; j < m; j += factors[k]) sup = std::max(sup, st.path[j]);
          for (std::size_t i = 0; i < nl; ++i)
            if (sup > levels[i]) ++acc[k * nl + i];
        }
      },
      [](Counts& into, const Counts& from) {
        for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
      });

  const double h = nominal_step(grid);
  std::vector<std::vector<MCEstimate>> out(nf);
  for (std::size_t k = 0; k < nf; ++k)
    for (std::size_t i = 0; i < nl; ++i)
      out[k].push_back(make_estimate(counts[k * nl + i], n, h * static_cast<double>(factors[k]), seed));
  return out;
}

MCEstimate mc_sup_prob(const PathSampler& sampler, std::span<const double> trend, double u, std::uint64_t n,
                       std::uint64_t seed) {
  const double level[1] = {u};
  const std::size_t factor[1] = {1};
  return mc_sup_table(sampler, trend, level, factor, n, seed)[0][0];
}

MCEstimate mc_sup_prob(const CorrelationModel& model, std::span<const double> trend, double u, const Grid& grid,
                       std::uint64_t n, std::uint64_t seed, SamplerOptions options) {
  return mc_sup_prob(PathSampler(model, grid, options), trend, u, n, seed);
}

Extrapolated refine_extrapolate(std::span<const MCEstimate> estimates) {
  if (estimates.size() < 3) throw PreconditionError("refine_extrapolate needs at least three estimates");
  std::vector<MCEstimate> e(estimates.begin(), estimates.end());
  std::sort(e.begin(), e.end(), [](const MCEstimate& x, const MCEstimate& y) { return x.grid_step > y.grid_step; });
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (!(e[i].grid_step > 0.0) || std::abs(e[i - 1].grid_step / e[i].grid_step - 2.0) > 1e-6)
      throw PreconditionError("estimates must sit on nested grids with step ratio 2");
    if (e[i].seed != e[0].seed || e[i].n != e[0].n)
      throw PreconditionError("nested estimates must share seed and replication count");
  }

  const MCEstimate& c1 = e[e.size() - 3];
  const MCEstimate& c2 = e[e.size() - 2];
  const MCEstimate& c3 = e[e.size() - 1];
  const double p1 = c1.p_hat;
  const double p2 = c2.p_hat;
  const double p3 = c3.p_hat;
  const double nn = static_cast<double>(c3.n);

  Extrapolated r;
  r.estimate = c3;
  if (p1 == p2 && p2 == p3) {
    r.bias_resolved = true;
    r.note = "identical estimates";
    return r;
  }

  // Coarse events are contained in fine ones: Cov(p_i, p_j) = (p_coarse - p_i p_j) / n.
  const std::array<double, 3> p{p1, p2, p3};
  std::array<double, 9> cov{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) cov[i * 3 + j] = (std::min(p[i], p[j]) - p[i] * p[j]) / nn;
  const AitkenFit fit = aitken_nested(p, cov);
  if (!fit.ok) {
    r.note = fit.note;
    return r;
  }
  const double p0 = fit.limit;
  const double var = fit.variance;

  r.bias_resolved = true;
  r.kappa = fit.kappa;
  r.bias = p0 - p3;
  r.estimate.p_hat = std::clamp(p0, 0.0, 1.0);
  r.estimate.std_error = std::sqrt(std::max(var, 0.0));
  r.estimate.grid_step = 0.0;
  return r;
}

ValidationReport asymptotic_validation(const std::function<double(double)>& asymptotic,
                                       const std::function<MCEstimate(double)>& mc,
                                       std::span<const double> u_schedule, const std::function<double(double)>& exact,
                                       ValidationReference reference) {
  if (u_schedule.empty()) throw PreconditionError("empty u schedule");
  for (std::size_t i = 1; i < u_schedule.size(); ++i)
    if (!(u_schedule[i] > u_schedule[i - 1])) throw PreconditionError("u schedule must be increasing");
  if (reference == ValidationReference::exact && !exact)
    throw PreconditionError("exact reference requested without an exact formula");

  ValidationReport report;
  report.reference = reference;
  for (double u : u_schedule) {
    ValidationRow row;
    row.u = u;
    row.mc = mc(u);
    if (row.mc.p_hat * static_cast<double>(row.mc.n) < kMinEvents) {
      std::ostringstream os;
      os << "p n < " << kMinEvents << " at u = " << u;
      throw InsufficientEvents(os.str(), static_cast<std::uint64_t>(row.mc.p_hat * static_cast<double>(row.mc.n)));
    }
    row.asymptotic = asymptotic(u);
    if (exact) row.exact = exact(u);
    const double ref = reference == ValidationReference::exact ? *row.exact : row.asymptotic;
    const double p = row.mc.p_hat;
    const double se = row.mc.std_error;
    row.ratio = ref / p;
    row.ratio_se = ref * se / (p * p);
    row.ratio_lo = ref / (p + 1.96 * se);
    row.ratio_hi = p > 1.96 * se ? ref / (p - 1.96 * se) : std::numeric_limits<double>::infinity();
    report.rows.push_back(row);
  }

  report.monotone = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1];
    const auto& b = report.rows[i];
    const double slack = 2.0 * std::hypot(a.ratio_se, b.ratio_se);
    if (std::abs(b.ratio - 1.0) > std::abs(a.ratio - 1.0) + slack) report.monotone = false;
  }
  const auto& last = report.rows.back();
  report.final_close = std::abs(last.ratio - 1.0) <= std::max(kFinalRatioTol, 3.0 * last.ratio_se);
  report.pass = report.monotone && report.final_close;
  return report;
}

Grid ruin_grid(double first, double ratio, double max_step) { return Grid::geometric(first, 1.0, ratio, max_step); }

std::vector<double> ruin_trend(const Grid& grid, double c, double delta) {
  if (!(c > 0.0 && delta > 0.0)) throw PreconditionError("c and delta must be positive");
  const double r = c / delta;
  std::vector<double> g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) g[i] = -r * (1.0 - std::sqrt(grid[i]));
  return g;
}

}  // namespace gex
