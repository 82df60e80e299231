#include "gauss_extremes/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "gauss_extremes/errors.hpp"

namespace gex {

namespace {

// Outermost point beyond which f stays above the truncation level, walking
// away from `from` in direction `dir`.
double truncation_point(const TrendFunction& f, double from, double dir) {
  double step = 1.0;
  double t = from;
  for (int i = 0; i < 80; ++i) {
    const double next = from + dir * step;
    if (f(next) > kTruncationLevel) {
      // confirm f does not dip back below the level further out
      bool stays = true;
      for (double k = 1.5; k <= 8.0; k *= 1.5)
        if (f(from + dir * step * k) <= kTruncationLevel) stays = false;
      if (stays) return next;
    }
    t = next;
    step *= 2.0;
  }
  throw QuadratureError("integrand e^{-f} does not decay; cannot truncate infinite range");
  return t;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& g, double a, double b) {
  if (!(a < b)) return {0.0, 0.0, a, b};
  auto converged = [](double v, double err) {
    return std::isfinite(v) && (err <= kQuadratureAbsTol || err <= 1e-10 * std::abs(v));
  };
  double err = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, 20, 1e-13, &err);
  if (converged(v, err)) return {v, err, a, b};
  // endpoint singularities of the derivative (|t|^gamma with gamma < 1)
  thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double l1 = 0.0;
  v = ts.integrate([&g](double t) { return g(t); }, a, b, 1e-13, &err, &l1);
  if (!std::isfinite(v)) throw QuadratureError("integral is not finite");
  if (!converged(v, err)) throw QuadratureError("quadrature did not converge");
  return {v, err, a, b};
}

QuadratureResult integrate_exp_neg(const TrendFunction& f, double x1, double x2) {
  if (!(x1 < x2)) {
    if (x1 == x2) return {0.0, 0.0, x1, x2};
    throw PreconditionError("integration needs x1 < x2");
  }
  double lo = std::max(x1, f.domain_min());
  double hi = std::min(x2, f.domain_max());
  if (std::isinf(lo)) lo = truncation_point(f, std::isfinite(hi) ? std::min(hi, 0.0) : 0.0, -1.0);
  if (std::isinf(hi)) hi = truncation_point(f, std::max(lo, 0.0), 1.0);
  if (!(lo < hi)) return {0.0, 0.0, lo, hi};

  // Split at kinks of |t|-type trends and at the truncation-free core.
  std::vector<double> cuts{lo};
  const double kink = -f.shift();
  if (kink > lo && kink < hi) cuts.push_back(kink);
  cuts.push_back(hi);

  QuadratureResult total{0.0, 0.0, lo, hi};
  auto g = [&f](double t) { return std::exp(-f(t)); };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto piece = integrate(g, cuts[i], cuts[i + 1]);
    total.value += piece.value;
    total.error += piece.error;
  }
  return total;
}

double sup_exp_neg(const TrendFunction& f, double x1, double x2) {
  const double lo = std::max(x1, f.domain_min());
  const double hi = std::min(x2, f.domain_max());
  if (lo > hi) throw PreconditionError("sup over an empty interval");
  return std::exp(-f.infimum(lo, hi));
}

}  // namespace gex
