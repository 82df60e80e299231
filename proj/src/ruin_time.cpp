#include "gauss_extremes/ruin_time.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/normal_tail.hpp"
#include "gauss_extremes/parallel.hpp"
#include "gauss_extremes/quadrature.hpp"

namespace gex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double piterbarg_value(const ConstantsProvider& provider, double alpha, double a, const TrendFunction& f, double x1,
                       double x2) {
  if (auto v = provider.piterbarg(alpha, a, f, x1, x2)) return v->value;
  throw ConstantUnavailable("Piterbarg constant for " + f.describe() + " is unavailable");
}

// P[ups, x] / P[ups, inf) for an even trend f; (-inf, x] is evaluated as
// [-x, inf) by reflection.
double piterbarg_ratio(double x, double alpha, double a, const TrendFunction& f, double ups,
                       const ConstantsProvider& provider) {
  const double denom = piterbarg_value(provider, alpha, a, f, ups, kInf);
  const double num = std::isinf(ups) ? piterbarg_value(provider, alpha, a, f, -x, kInf)
                                     : piterbarg_value(provider, alpha, a, f, ups, x);
  return std::clamp(num / denom, 0.0, 1.0);
}

}  // namespace

double cond_passage_cdf_locstat(double x, double alpha, double gamma, double a, double c, T0Position position,
                                const ConstantsProvider& provider, double tie_tol) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw PreconditionError("alpha must lie in (0, 2]");
  if (!(gamma > 0.0) || !(a > 0.0) || !(c > 0.0)) throw PreconditionError("gamma, a, c must be positive");
  if (std::isnan(x)) throw PreconditionError("x must not be NaN");
  const Comparison cmp = compare_exponents(alpha, 2.0 * gamma, tie_tol);
  const auto f = TrendFunction::abs_power_two_sided(c, gamma);
  const double s = 1.0 / gamma;

  if (position == T0Position::right_boundary) {
    if (!(x < 0.0)) throw PreconditionError("t0 = T needs x < 0");
    const double y = c * std::pow(-x, gamma);
    switch (cmp) {
      case Comparison::less: return boost::math::gamma_q(s, y);
      case Comparison::equal:
        return std::clamp(piterbarg_value(provider, alpha, a, f, -x, kInf) /
                              piterbarg_value(provider, alpha, a, f, 0.0, kInf),
                          0.0, 1.0);
      case Comparison::greater: return std::exp(-y);
    }
  }

  const bool interior = position == T0Position::interior;
  if (!interior && !(x > 0.0)) throw PreconditionError("boundary t0 needs x > 0");
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  const double y = c * std::pow(std::abs(x), gamma);
  switch (cmp) {
    case Comparison::less: {
      const double half = boost::math::gamma_p(s, y);
      if (!interior) return half;
      return x >= 0.0 ? 0.5 * (1.0 + half) : 0.5 * (1.0 - half);
    }
    case Comparison::equal: return piterbarg_ratio(x, alpha, a, f, interior ? -kInf : 0.0, provider);
    case Comparison::greater: return (interior && x < 0.0) ? std::exp(-y) : 1.0;
  }
  return 0.0;
}

double cond_passage_cdf_nonstat(double x, const RegimeParams& p, const ConstantsProvider& provider) {
  if (std::isnan(x)) throw PreconditionError("x must not be NaN");
  const TrendFunction f = nonstationary_f(p);
  const double bs = p.beta_star();
  const Comparison cmp = compare_exponents(p.alpha, bs, p.tie_tol);
  const double a_eff = p.a / (p.sigma * p.sigma);

  if (p.t0_position == T0Position::right_boundary) {
    if (!(x < 0.0)) throw PreconditionError("t0 = T needs x < 0");
    switch (cmp) {
      case Comparison::less:
        return std::clamp(integrate_exp_neg(f, -x, kInf).value / integrate_exp_neg(f, 0.0, kInf).value, 0.0, 1.0);
      case Comparison::equal:
        return std::clamp(piterbarg_value(provider, p.alpha, a_eff, f, -x, kInf) /
                              piterbarg_value(provider, p.alpha, a_eff, f, 0.0, kInf),
                          0.0, 1.0);
      case Comparison::greater: return std::exp(-f(x));
    }
  }

  const double ups = p.upsilon();
  if (!(x > ups)) throw PreconditionError("x must exceed upsilon");
  if (std::isinf(x)) return 1.0;
  switch (cmp) {
    case Comparison::less:
      return std::clamp(integrate_exp_neg(f, ups, x).value / integrate_exp_neg(f, ups, kInf).value, 0.0, 1.0);
    case Comparison::equal: return piterbarg_ratio(x, p.alpha, a_eff, f, ups, provider);
    case Comparison::greater: return sup_exp_neg(f, ups, x);
  }
  return 0.0;
}

double cond_passage_cdf_general(double x, EtaTag tag, double alpha, double eta, const TrendFunction& f, double x1,
                                double x2, const ConstantsProvider& provider, double sigma0) {
  if (!(x1 < x2)) throw PreconditionError("need x1 < x2");
  if (!(x >= x1 && x <= x2)) throw PreconditionError("x must lie in [x1, x2]");
  if (!(sigma0 > 0.0)) throw PreconditionError("sigma0 must be positive");
  const double s2 = 1.0 / (sigma0 * sigma0);
  const TrendFunction fs = sigma0 == 1.0 ? f : f.scaled(s2);
  switch (tag) {
    case EtaTag::infinite: {
      if (x == x1) return 0.0;
      const double full = integrate_exp_neg(fs, x1, x2).value;
      if (x == x2) return 1.0;
      return std::clamp(integrate_exp_neg(fs, x1, x).value / full, 0.0, 1.0);
    }
    case EtaTag::finite: {
      if (x == x2) return 1.0;
      const double num = piterbarg_value(provider, alpha, s2 * eta, fs, x1, x);
      const double den = piterbarg_value(provider, alpha, s2 * eta, fs, x1, x2);
      return std::clamp(num / den, 0.0, 1.0);
    }
    case EtaTag::zero: return sup_exp_neg(fs, x1, x);
  }
  return 0.0;
}

double bridge_drift_passage_cdf(double x, double c, bool half_horizon, const ConstantsProvider& provider) {
  const double x2 = half_horizon ? c / 4.0 : kInf;
  if (half_horizon && x > x2) throw PreconditionError("horizon 1/2 needs x <= c/4");
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  return cond_passage_cdf_general(x, EtaTag::infinite, 1.0, kInf, TrendFunction::abs_power_two_sided(2.0, 2.0), -kInf,
                                  x2, provider, 0.5);
}

double ruin_passage_cdf(double x, double c, double delta, double sigma, const ConstantsProvider& provider) {
  if (!(c > 0.0 && delta > 0.0 && sigma > 0.0)) throw PreconditionError("c, delta, sigma must be positive");
  const double r = c / delta;
  if (!(x > -r * r)) throw PreconditionError("x must exceed -r^2");
  if (std::isinf(x)) return 1.0;
  const auto h = TrendFunction::ruin_h(delta, sigma, r);
  const double a = delta / (sigma * sigma);
  return std::clamp(piterbarg_value(provider, 1.0, a, h, -r * r, x) / piterbarg_value(provider, 1.0, a, h, -r * r, kInf),
                    0.0, 1.0);
}

double ruin_passage_rescale(double tau, double u, double c, double delta) {
  const double k = c / (delta * u + c);
  return u * u * (std::exp(-2.0 * delta * tau) - k * k);
}

CdfBand wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double EmpiricalCdf::at(double x) const {
  if (events == 0) return 0.0;
  const auto it = std::upper_bound(support.begin(), support.end(), x);
  if (it == support.begin()) return 0.0;
  return static_cast<double>(cumulative[static_cast<std::size_t>(it - support.begin()) - 1]) /
         static_cast<double>(events);
}

CdfBand EmpiricalCdf::band(double x) const {
  const auto it = std::upper_bound(support.begin(), support.end(), x);
  const std::uint64_t k =
      it == support.begin() ? 0 : cumulative[static_cast<std::size_t>(it - support.begin()) - 1];
  return wilson_interval(k, events);
}

EmpiricalCdf mc_conditional_passage(const PathSampler& sampler, std::span<const double> trend, double u,
                                    std::uint64_t n, std::uint64_t seed,
                                    const std::function<double(double)>& rescale, PassageOptions options) {
  const Grid& grid = sampler.grid();
  const std::size_t m = grid.size();
  if (trend.size() != m) throw PreconditionError("trend length must equal grid length");

  struct State {
    PathSampler::Workspace ws;
    std::vector<double> path;
  };
  using Hits = std::vector<std::uint32_t>;
  const Hits hits = block_reduce(
      n, Hits{},
      [&] { return State{sampler.make_workspace(), std::vector<double>(m)}; },
      [&](std::uint64_t rep, Hits& acc, State& st) {
        sampler.sample(seed, rep, st.path, st.ws);
        if (options.reverse_time) {
          for (std::size_t j = m; j-- > 0;) {
            if (st.path[j] + trend[j] > u) {
              acc.push_back(static_cast<std::uint32_t>(j));
              return;
            }
          }
        } else {
          for (std::size_t j = 0; j < m; ++j) {
            if (st.path[j] + trend[j] > u) {
              acc.push_back(static_cast<std::uint32_t>(j));
              return;
            }
          }
        }
      },
      [](Hits& into, const Hits& from) { into.insert(into.end(), from.begin(), from.end()); });

  if (hits.size() < options.min_events)
    throw InsufficientEvents("too few exceedances to condition on", hits.size());

  std::vector<std::uint64_t> per_node(m, 0);
  for (const auto j : hits) ++per_node[j];
  std::vector<std::pair<double, std::uint64_t>> values;
  for (std::size_t j = 0; j < m; ++j)
    if (per_node[j] > 0) values.emplace_back(rescale(grid[j]), per_node[j]);
  std::sort(values.begin(), values.end());

  EmpiricalCdf cdf;
  cdf.events = hits.size();
  cdf.n = n;
  std::uint64_t acc = 0;
  for (const auto& [x, k] : values) {
    acc += k;
    if (!cdf.support.empty() && cdf.support.back() == x) {
      cdf.cumulative.back() = acc;
    } else {
      cdf.support.push_back(x);
      cdf.cumulative.push_back(acc);
    }
  }
  return cdf;
}

EmpiricalCdf mc_conditional_passage(const CorrelationModel& model, std::span<const double> trend, double u,
                                    const Grid& grid, std::uint64_t n, std::uint64_t seed,
                                    const std::function<double(double)>& rescale, PassageOptions options) {
  return mc_conditional_passage(PathSampler(model, grid), trend, u, n, seed, rescale, options);
}

double bridge_drift_passage_exact(double x, double u, double c) {
  if (!(u > 0.0) || !(c >= 0.0)) throw PreconditionError("need u > 0 and c >= 0");
  const double t_u = u / (c + 2.0 * u);
  const double t = t_u + x / u;
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  // P(tau <= t) = P(X(t) > m) + E[exp(-k (m - Y)); Y < m], Y ~ N(0, v):
  // a bridge on [0, t] ending at Y crosses the line u + c s with
  // probability exp(-2u(m - Y)/t).
  const double v = t * (1.0 - t);
  const double sd = std::sqrt(v);
  const double m = u + c * t;
  const double k = 2.0 * u / t;
  const double direct = normal_tail(m / sd);
  const double log_cross = -k * m + 0.5 * k * k * v + log_normal_tail(-(m - k * v) / sd);
  const double log_total = -2.0 * u * (u + c);
  return std::clamp((direct + std::exp(log_cross)) / std::exp(log_total), 0.0, 1.0);
}

}  // namespace gex
