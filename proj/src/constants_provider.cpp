#include "gauss_extremes/constants_provider.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/normal_tail.hpp"

namespace gex {

namespace {

bool near(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }

ConstantValue exact(double v) { return {v, ConstantSource::closed_form, std::nullopt}; }

}  // namespace

std::string to_string(ConstantSource s) {
  switch (s) {
    case ConstantSource::closed_form: return "closed_form";
    case ConstantSource::quadrature: return "quadrature";
    case ConstantSource::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

std::optional<ConstantValue> ClosedFormConstants::pickands(double alpha) const {
  if (alpha == 1.0) return exact(1.0);
  if (alpha == 2.0) return exact(1.0 / std::sqrt(std::numbers::pi));
  return std::nullopt;
}

std::optional<ConstantValue> ClosedFormConstants::piterbarg(double alpha, double a, const TrendFunction& f, double x1,
                                                            double x2) const {
  if (x1 == 0.0 && x2 == 0.0) return exact(1.0);
  if (f.shift() != 0.0 || !std::isinf(x2) || x2 < 0.0) return std::nullopt;
  auto p = f.parameters();
  if (f.kind() == TrendKind::ruin_h) {
    if (f.scale() != 1.0) return std::nullopt;
  } else {
    p[0] *= f.scale();
  }
  const bool from_zero = x1 == 0.0;
  const bool whole_line = std::isinf(x1) && x1 < 0.0;

  switch (f.kind()) {
    case TrendKind::linear:
      if (alpha == 1.0 && from_zero) return exact(1.0 + a / p[0]);
      if (alpha == 2.0 && from_zero) {
        const double m = p[0] / std::sqrt(2.0 * a);
        return exact(normal_cdf(m) + normal_pdf(m) / m);
      }
      break;
    case TrendKind::power:
    case TrendKind::abs_power_two_sided: {
      const double c = p[0];
      const double gamma = p[1];
      const bool two_sided_ok = f.kind() == TrendKind::abs_power_two_sided && whole_line;
      if (alpha == 1.0 && gamma == 1.0) {
        // sup of sqrt(2a) B(t) - (a + c) t is exponential with rate (a + c)/a
        const double lam = (a + c) / a;
        if (from_zero) return exact(lam / (lam - 1.0));
        if (two_sided_ok) return exact(2.0 * lam * (1.0 / (lam - 1.0) - 1.0 / (2.0 * lam - 1.0)));
      }
      if (alpha == 2.0 && gamma == 1.0 && from_zero) {
        // sup_t sqrt(2a) N t - a t^2 - c t is attained at t* > 0 iff N > m
        const double m = c / std::sqrt(2.0 * a);
        return exact(normal_cdf(m) + normal_pdf(m) / m);
      }
      if (alpha == 2.0 && gamma == 2.0) {
        const double root = std::sqrt((a + c) / c);
        if (from_zero) return exact(0.5 * (1.0 + root));
        if (two_sided_ok) return exact(root);
      }
      break;
    }
    case TrendKind::ruin_h: {
      const double delta = p[0], sigma = p[1], r = p[2];
      if (alpha == 1.0 && near(a, delta / (sigma * sigma)) && near(x1, -r * r)) {
        const double kappa = r * r * delta / (sigma * sigma);
        return exact(std::exp(-kappa) / normal_tail(std::sqrt(2.0 * kappa)));
      }
      break;
    }
    default: break;
  }
  return std::nullopt;
}

MonteCarloConstants::MonteCarloConstants(MonteCarloSettings settings) : settings_(std::move(settings)) {}

std::optional<ConstantValue> MonteCarloConstants::pickands(double alpha) const {
  std::ostringstream key;
  key.precision(17);
  key << "H|" << alpha;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = cache_.find(key.str()); it != cache_.end()) return it->second;
  }
  const auto est = pickands_limit(alpha, settings_.grid_step, settings_.n, settings_.seed,
                                  settings_.pickands_schedule, settings_.options);
  ConstantValue v{est.value, ConstantSource::monte_carlo, est};
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(key.str(), v);
  return v;
}

std::optional<ConstantValue> MonteCarloConstants::piterbarg(double alpha, double a, const TrendFunction& f, double x1,
                                                            double x2) const {
  std::ostringstream key;
  key.precision(17);
  key << "P|" << alpha << "|" << a << "|" << f.describe() << "|" << x1 << "|" << x2;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = cache_.find(key.str()); it != cache_.end()) return it->second;
  }
  ConstantEstimate est;
  if (std::isfinite(x1) && std::isfinite(x2)) {
    est = piterbarg_estimate(alpha, a, f, x1, x2, settings_.grid_step, settings_.n, settings_.seed, settings_.options);
  } else if (std::isinf(x2) && x2 > 0.0) {
    std::vector<double> schedule;
    for (const double T : settings_.piterbarg_schedule)
      if (std::isinf(x1) || T > x1) schedule.push_back(T);
    est = piterbarg_limit(alpha, a, f, x1, settings_.grid_step, settings_.n, settings_.seed, schedule, settings_.tol,
                          settings_.options);
  } else {
    return std::nullopt;
  }
  ConstantValue v{est.value, ConstantSource::monte_carlo, est};
  std::lock_guard<std::mutex> lock(mutex_);
  cache_.emplace(key.str(), v);
  return v;
}

CompositeConstants::CompositeConstants(std::vector<std::shared_ptr<const ConstantsProvider>> chain)
    : chain_(std::move(chain)) {}

std::optional<ConstantValue> CompositeConstants::pickands(double alpha) const {
  for (const auto& p : chain_)
    if (auto v = p->pickands(alpha)) return v;
  return std::nullopt;
}

std::optional<ConstantValue> CompositeConstants::piterbarg(double alpha, double a, const TrendFunction& f, double x1,
                                                           double x2) const {
  for (const auto& p : chain_)
    if (auto v = p->piterbarg(alpha, a, f, x1, x2)) return v;
  return std::nullopt;
}

}  // namespace gex
