#include "gauss_extremes/pickands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "gauss_extremes/aitken.hpp"
#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/parallel.hpp"
#include "gauss_extremes/rng.hpp"

namespace gex {

namespace {

constexpr std::uint64_t kAnchorLane = 0xa7c0ULL;
constexpr double kNegligible = -40.0;

long long floor_mod(long long k, long long q) {
  const long long r = k % q;
  return r < 0 ? r + q : r;
}

Grid relative_grid(std::size_t m, double h) {
  if (m == 1) return Grid({0.0}, h);
  std::vector<double> pts(m);
  for (std::size_t i = 0; i < m; ++i) pts[i] = h * static_cast<double>(i);
  return Grid(std::move(pts), h);
}

PathSampler make_sampler(double alpha, const Grid& grid, double h, const EstimatorOptions& options) {
  // The shift estimator re-anchors the path itself, so it can simulate on
  // the lattice translated to start at 0; the path then depends only on
  // (m, h), which makes shifted intervals use identical paths.
  const Grid g = options.estimator == Estimator::shift_average ? relative_grid(grid.size(), h) : grid;
  return PathSampler(CorrelationModel::fbm(alpha), g, options.sampler);
}

void check_common(double alpha, double a, double S, double T) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw PreconditionError("alpha must lie in (0, 2]");
  if (!(a > 0.0) || !std::isfinite(a)) throw PreconditionError("a must be positive");
  if (!std::isfinite(S) || !std::isfinite(T) || S > T) throw PreconditionError("interval needs finite S <= T");
}

void check_schedule(std::span<const double> schedule, std::size_t min_size) {
  if (schedule.size() < min_size) throw PreconditionError("schedule is too short");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0) || !std::isfinite(schedule[i])) throw PreconditionError("schedule entries must be positive");
    if (i > 0 && !(schedule[i] > schedule[i - 1])) throw PreconditionError("schedule must be strictly increasing");
  }
}

}  // namespace

std::string to_string(Estimator e) { return e == Estimator::direct ? "direct" : "shift_average"; }

double default_grid_step(double S, double T) {
  constexpr double base = 1.0 / 512.0;
  const double len = T - S;
  return len / base + 1.0 > 4096.0 ? len / 4095.0 : base;
}

PiterbargKernel::PiterbargKernel(double alpha, double a, TrendFunction f, double S, double T, double grid_step,
                                 EstimatorOptions options, std::vector<std::size_t> views)
    : alpha_(alpha),
      a_(a),
      step_(grid_step),
      estimator_(options.estimator),
      grid_((check_common(alpha, a, S, T), Grid::lattice(S, T, grid_step))),
      sampler_(make_sampler(alpha, grid_, grid_step, options)),
      views_(std::move(views)) {
  if (S < f.domain_min() - 1e-12 || T > f.domain_max() + 1e-12)
    throw PreconditionError("interval leaves the domain of the trend function");
  if (views_.empty()) throw PreconditionError("at least one view is required");
  const std::size_t q_max = *std::max_element(views_.begin(), views_.end());
  for (const std::size_t q : views_)
    if (q == 0 || q_max % q != 0) throw PreconditionError("view factors must divide the coarsest factor");

  const std::size_t m = grid_.size();
  const long long k_lo = std::llround(grid_[0] / grid_step);
  members_.resize(views_.size());
  for (std::size_t i = 0; i < m; ++i) {
    const long long k = k_lo + static_cast<long long>(i);
    for (std::size_t v = 0; v < views_.size(); ++v)
      if (floor_mod(k, static_cast<long long>(views_[v])) == 0) members_[v].push_back(static_cast<std::uint32_t>(i));
  }
  for (const auto& mem : members_)
    if (mem.empty()) throw PreconditionError("interval too short for the coarsest view");

  neg_f_.resize(m);
  drift_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double fv = f(grid_[i]);
    neg_f_[i] = -fv;
    drift_[i] = -a * std::pow(std::abs(grid_[i]), alpha) - fv;
  }
  lag_cost_.resize(m);
  for (std::size_t d = 0; d < m; ++d) lag_cost_[d] = a * std::pow(grid_step * static_cast<double>(d), alpha);

  const auto coarsest = static_cast<std::size_t>(std::max_element(views_.begin(), views_.end()) - views_.begin());
  anchors_ = members_[coarsest];
  double w_max = -std::numeric_limits<double>::infinity();
  for (const auto i : anchors_) w_max = std::max(w_max, neg_f_[i]);
  anchor_cdf_.resize(anchors_.size());
  double acc = 0.0;
  for (std::size_t c = 0; c < anchors_.size(); ++c) {
    acc += std::exp(neg_f_[anchors_[c]] - w_max);
    anchor_cdf_[c] = acc;
  }
  for (double& x : anchor_cdf_) x /= acc;
  anchor_cdf_.back() = 1.0;
  log_z_ = w_max + std::log(acc);
}

PiterbargKernel::Workspace PiterbargKernel::make_workspace() const {
  Workspace ws{sampler_.make_workspace(), std::vector<double>(grid_.size()), std::vector<double>(grid_.size())};
  return ws;
}

void PiterbargKernel::evaluate(std::uint64_t seed, std::uint64_t rep, Workspace& ws, std::span<double> out) const {
  const std::size_t m = grid_.size();
  ws.path.resize(m);
  ws.v.resize(m);
  sampler_.sample(seed, rep, ws.path, ws.sampler);
  const double s2a = std::sqrt(2.0 * a_);
  const double* b = ws.path.data();
  double* v = ws.v.data();
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  if (estimator_ == Estimator::direct) {
    for (std::size_t i = 0; i < m; ++i) v[i] = s2a * b[i] + drift_[i];
    for (std::size_t k = 0; k < views_.size(); ++k) {
      double best = kNegInf;
      for (const auto i : members_[k]) best = std::max(best, v[i]);
      out[k] = std::exp(best);
    }
    return;
  }

  Engine engine = substream(seed, rep, kAnchorLane);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(engine);
  const auto pos = static_cast<std::size_t>(std::upper_bound(anchor_cdf_.begin(), anchor_cdf_.end(), u) - anchor_cdf_.begin());
  const std::size_t j = anchors_[std::min(pos, anchors_.size() - 1)];
  const double bj = b[j];
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t d = i > j ? i - j : j - i;
    v[i] = s2a * (b[i] - bj) - lag_cost_[d] + neg_f_[i];
  }
  double top = kNegInf;
  for (const auto i : anchors_) top = std::max(top, v[i]);
  double sum = 0.0;
  for (const auto i : anchors_) {
    const double x = v[i] - top;
    if (x > kNegligible) sum += std::exp(x);
  }
  const double lse = top + std::log(sum);
  for (std::size_t k = 0; k < views_.size(); ++k) {
    double best = kNegInf;
    if (members_[k].size() == anchors_.size()) {
      best = top;
    } else {
      for (const auto i : members_[k]) best = std::max(best, v[i]);
    }
    out[k] = std::exp(log_z_ + best - lse);
  }
}

double MomentSummary::variance_of_mean(std::span<const double> weights) const {
  const std::size_t k = mean.size();
  if (weights.size() != k) throw PreconditionError("weight vector has the wrong length");
  if (n < 2) return 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) var += weights[i] * weights[j] * cov[i * k + j];
  return std::max(var, 0.0) / static_cast<double>(n);
}

MomentSummary run_kernels(std::span<const PiterbargKernel* const> kernels, std::uint64_t n, std::uint64_t seed) {
  std::size_t dims = 0;
  for (const auto* kern : kernels) dims += kern->view_count();

  struct Acc {
    std::vector<double> s;
    std::vector<double> ss;
  };
  struct State {
    std::vector<PiterbargKernel::Workspace> ws;
    std::vector<double> x;
  };
  const Acc zero{std::vector<double>(dims, 0.0), std::vector<double>(dims * dims, 0.0)};

  const Acc total = block_reduce(
      n, zero,
      [&] {
        State st;
        for (const auto* kern : kernels) st.ws.push_back(kern->make_workspace());
        st.x.resize(dims);
        return st;
      },
      [&](std::uint64_t rep, Acc& acc, State& st) {
        std::size_t off = 0;
        for (std::size_t k = 0; k < kernels.size(); ++k) {
          const std::size_t nv = kernels[k]->view_count();
          kernels[k]->evaluate(seed, rep, st.ws[k], std::span<double>(st.x.data() + off, nv));
          off += nv;
        }
        for (std::size_t i = 0; i < dims; ++i) {
          acc.s[i] += st.x[i];
          for (std::size_t j = 0; j < dims; ++j) acc.ss[i * dims + j] += st.x[i] * st.x[j];
        }
      },
      [](Acc& into, const Acc& from) {
        for (std::size_t i = 0; i < into.s.size(); ++i) into.s[i] += from.s[i];
        for (std::size_t i = 0; i < into.ss.size(); ++i) into.ss[i] += from.ss[i];
      });

  MomentSummary out;
  out.n = n;
  out.mean.assign(dims, 0.0);
  out.cov.assign(dims * dims, 0.0);
  if (n == 0) return out;
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < dims; ++i) out.mean[i] = total.s[i] / nn;
  if (n > 1) {
    for (std::size_t i = 0; i < dims; ++i)
      for (std::size_t j = 0; j < dims; ++j)
        out.cov[i * dims + j] = (total.ss[i * dims + j] - nn * out.mean[i] * out.mean[j]) / (nn - 1.0);
  }
  return out;
}

std::vector<ConstantEstimate> piterbarg_estimate_nested(double alpha, double a, const TrendFunction& f, double S,
                                                        double T, double finest_step,
                                                        std::vector<std::size_t> factors, std::uint64_t n,
                                                        std::uint64_t seed, EstimatorOptions options) {
  if (n == 0) throw PreconditionError("n must be positive");
  if (!(finest_step > 0.0)) throw PreconditionError("grid_step must be positive");
  const PiterbargKernel kernel(alpha, a, f, S, T, finest_step, options, factors);
  const PiterbargKernel* ptr = &kernel;
  const MomentSummary sum = run_kernels(std::span<const PiterbargKernel* const>(&ptr, 1), n, seed);

  std::vector<ConstantEstimate> out;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    std::vector<double> w(factors.size(), 0.0);
    w[k] = 1.0;
    ConstantEstimate e;
    e.value = sum.mean[k];
    e.std_error = std::sqrt(sum.variance_of_mean(w));
    e.n = n;
    e.grid_step = finest_step * static_cast<double>(factors[k]);
    e.S = S;
    e.T = T;
    e.estimator = options.estimator;
    e.seed = seed;
    out.push_back(e);
  }
  return out;
}

ConstantEstimate piterbarg_estimate(double alpha, double a, const TrendFunction& f, double S, double T,
                                    double grid_step, std::uint64_t n, std::uint64_t seed, EstimatorOptions options) {
  if (grid_step <= 0.0) grid_step = default_grid_step(S, T);
  if (!options.grid_extrapolation || T - S < 8.0 * grid_step)
    return piterbarg_estimate_nested(alpha, a, f, S, T, grid_step, {1}, n, seed, options).front();

  if (n < 2) throw PreconditionError("grid extrapolation needs n >= 2");
  const PiterbargKernel kernel(alpha, a, f, S, T, grid_step, options, {4, 2, 1});
  const PiterbargKernel* ptr = &kernel;
  const MomentSummary sum = run_kernels(std::span<const PiterbargKernel* const>(&ptr, 1), n, seed);
  const double nn = static_cast<double>(n);
  std::array<double, 9> cov{};
  for (std::size_t i = 0; i < 9; ++i) cov[i] = sum.cov[i] / nn;

  ConstantEstimate e;
  e.value = sum.mean[2];
  e.std_error = std::sqrt(cov[8]);
  e.n = n;
  e.grid_step = grid_step;
  e.S = S;
  e.T = T;
  e.estimator = options.estimator;
  e.seed = seed;
  const AitkenFit fit = aitken_nested({sum.mean[0], sum.mean[1], sum.mean[2]}, cov);
  if (fit.ok) {
    e.value = fit.limit;
    e.std_error = std::sqrt(fit.variance);
    e.grid_extrapolated = true;
  }
  return e;
}

ConstantEstimate pickands_estimate(double alpha, double T, double grid_step, std::uint64_t n, std::uint64_t seed,
                                   EstimatorOptions options) {
  if (!(T >= 0.0)) throw PreconditionError("T must be >= 0");
  if (T == 0.0) grid_step = grid_step > 0.0 ? grid_step : 1.0;
  return piterbarg_estimate(alpha, 1.0, TrendFunction::zero(), 0.0, T, grid_step, n, seed, options);
}

ConstantEstimate pickands_limit(double alpha, double grid_step, std::uint64_t n, std::uint64_t seed,
                                std::span<const double> schedule, EstimatorOptions options) {
  check_schedule(schedule, 2);
  if (n == 0) throw PreconditionError("n must be positive");
  const std::size_t K = schedule.size();
  const double h = grid_step > 0.0 ? grid_step : default_grid_step(0.0, schedule.back());

  std::vector<PiterbargKernel> kernels;
  kernels.reserve(K);
  for (const double T : schedule) kernels.emplace_back(alpha, 1.0, TrendFunction::zero(), 0.0, T, h, options);
  std::vector<const PiterbargKernel*> ptrs;
  for (const auto& k : kernels) ptrs.push_back(&k);
  const MomentSummary sum = run_kernels(ptrs, n, seed);

  // Least-squares intercept of y = H[0,T]/T against x = 1/T, written as a
  // linear combination of the per-horizon means.
  double xbar = 0.0;
  for (const double T : schedule) xbar += 1.0 / T;
  xbar /= static_cast<double>(K);
  double sxx = 0.0;
  for (const double T : schedule) sxx += (1.0 / T - xbar) * (1.0 / T - xbar);
  std::vector<double> w(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double x = 1.0 / schedule[k];
    w[k] = (1.0 / static_cast<double>(K) - xbar * (x - xbar) / sxx) / schedule[k];
  }

  ConstantEstimate e;
  for (std::size_t k = 0; k < K; ++k) {
    e.value += w[k] * sum.mean[k];
    std::vector<double> unit(K, 0.0);
    unit[k] = 1.0;
    e.trajectory.push_back(
        {schedule[k], sum.mean[k] / schedule[k], std::sqrt(sum.variance_of_mean(unit)) / schedule[k]});
  }
  e.std_error = std::sqrt(sum.variance_of_mean(w));
  e.n = n;
  e.grid_step = h;
  e.S = 0.0;
  e.T = std::numeric_limits<double>::infinity();
  e.extrapolated = true;
  e.estimator = options.estimator;
  e.seed = seed;
  return e;
}

ExpTailFit fit_exponential_tail(std::span<const double> horizons, std::span<const double> values) {
  ExpTailFit fit;
  if (horizons.size() != 3 || values.size() != 3) return fit;
  const double t1 = horizons[0], t2 = horizons[1], t3 = horizons[2];
  const double d1 = values[1] - values[0];
  const double d2 = values[2] - values[1];
  if (!(d1 > 0.0 && d2 > 0.0)) return fit;
  const double rho = d2 / d1;
  const double g21 = t2 - t1;
  const double g32 = t3 - t2;
  if (!(rho < g32 / g21)) return fit;
  // ratio(kappa) = e^{-kappa g21} (1 - e^{-kappa g32}) / (1 - e^{-kappa g21}), decreasing from g32/g21 to 0
  auto ratio = [&](double kappa) {
    return std::exp(-kappa * g21) * (-std::expm1(-kappa * g32)) / (-std::expm1(-kappa * g21));
  };
  double lo = 1e-12;
  double hi = 1.0;
  while (ratio(hi) > rho && hi < 1e6) hi *= 2.0;
  if (ratio(hi) > rho) return fit;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (ratio(mid) > rho) lo = mid;
    else hi = mid;
  }
  fit.kappa = std::sqrt(lo * hi);
  fit.limit = values[2] + d2 / std::expm1(fit.kappa * g32);
  fit.ok = std::isfinite(fit.limit);
  return fit;
}

ConstantEstimate piterbarg_limit(double alpha, double a, const TrendFunction& f, double S, double grid_step,
                                 std::uint64_t n, std::uint64_t seed, std::span<const double> schedule, double tol,
                                 EstimatorOptions options) {
  check_schedule(schedule, 2);
  if (!(tol >= 0.0)) throw PreconditionError("tol must be >= 0");
  const bool two_sided = std::isinf(S) && S < 0.0;
  if (!two_sided && !std::isfinite(S)) throw PreconditionError("S must be finite or -infinity");
  if (!two_sided && !(schedule.front() > S)) throw PreconditionError("schedule must start to the right of S");

  std::vector<ScheduleExhausted::Step> steps;
  std::vector<ConstantEstimate> levels;
  for (const double T : schedule) {
    const double lo = two_sided ? -T : S;
    const double h = grid_step > 0.0 ? grid_step : default_grid_step(lo, T);
    levels.push_back(piterbarg_estimate(alpha, a, f, lo, T, h, n, seed, options));
    steps.push_back({T, levels.back().value, levels.back().std_error});
    const std::size_t k = levels.size() - 1;
    if (k == 0) continue;

    const auto& cur = levels[k];
    const auto& prev = levels[k - 1];
    const double margin = tol * std::abs(cur.value) + 2.0 * std::hypot(cur.std_error, prev.std_error);
    if (std::abs(cur.value - prev.value) >= margin) continue;

    ConstantEstimate out = cur;
    out.S = two_sided ? -std::numeric_limits<double>::infinity() : S;
    out.T = std::numeric_limits<double>::infinity();
    for (const auto& s : steps) out.trajectory.push_back({s.horizon, s.value, s.stderr_});
    if (k >= 2) {
      const double hs[3] = {levels[k - 2].T, levels[k - 1].T, cur.T};
      const double vs[3] = {levels[k - 2].value, prev.value, cur.value};
      const double noise = 2.0 * std::hypot(levels[k - 2].std_error, prev.std_error);
      const auto fit = fit_exponential_tail(hs, vs);
      if (fit.ok && vs[1] - vs[0] > noise) {
        out.value = fit.limit;
        out.extrapolated = true;
      }
    }
    return out;
  }
  std::ostringstream os;
  os << "interval growth did not converge within the schedule (last T = " << schedule.back() << ")";
  throw ScheduleExhausted(os.str(), steps);
}

}  // namespace gex
