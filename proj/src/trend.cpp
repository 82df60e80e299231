#include "gauss_extremes/trend.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gauss_extremes/errors.hpp"

namespace gex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace

TrendFunction TrendFunction::zero() { return TrendFunction(); }

TrendFunction TrendFunction::linear(double c) {
  require(c > 0.0 && std::isfinite(c), "linear trend needs c > 0");
  TrendFunction f;
  f.kind_ = TrendKind::linear;
  f.p0_ = c;
  return f;
}

TrendFunction TrendFunction::power(double c, double gamma) {
  require(c > 0.0 && std::isfinite(c), "power trend needs c > 0");
  require(gamma > 0.0 && std::isfinite(gamma), "power trend needs gamma > 0");
  TrendFunction f;
  f.kind_ = TrendKind::power;
  f.p0_ = c;
  f.p1_ = gamma;
  return f;
}

TrendFunction TrendFunction::abs_power_two_sided(double c, double gamma) {
  require(c > 0.0 && std::isfinite(c), "power trend needs c > 0");
  require(gamma > 0.0 && std::isfinite(gamma), "power trend needs gamma > 0");
  TrendFunction f;
  f.kind_ = TrendKind::abs_power_two_sided;
  f.p0_ = c;
  f.p1_ = gamma;
  return f;
}

TrendFunction TrendFunction::ruin_h(double delta, double sigma, double r) {
  require(delta > 0.0 && sigma > 0.0, "ruin_h needs delta, sigma > 0");
  require(r > 0.0 && std::isfinite(r), "ruin_h needs r = c/delta > 0");
  TrendFunction f;
  f.kind_ = TrendKind::ruin_h;
  f.p0_ = delta;
  f.p1_ = sigma;
  f.p2_ = r;
  return f;
}

TrendFunction TrendFunction::sqrt_drift(double c, double k) {
  require(c > 0.0 && std::isfinite(c), "sqrt_drift needs c > 0");
  require(std::isfinite(k), "sqrt_drift needs finite k");
  TrendFunction f;
  f.kind_ = TrendKind::sqrt_drift;
  f.p0_ = c;
  f.p1_ = k;
  return f;
}

TrendFunction TrendFunction::table(std::vector<double> points, std::vector<double> values) {
  require(!points.empty() && points.size() == values.size(), "table trend needs matching non-empty arrays");
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(std::isfinite(points[i]) && std::isfinite(values[i]), "table trend entries must be finite");
    require(i == 0 || points[i] > points[i - 1], "table points must be strictly increasing");
    if (points[i] == 0.0) require(values[i] == 0.0, "table trend must vanish at 0");
  }
  TrendFunction f;
  f.kind_ = TrendKind::table;
  f.xs_ = std::make_shared<const std::vector<double>>(std::move(points));
  f.ys_ = std::make_shared<const std::vector<double>>(std::move(values));
  return f;
}

TrendFunction operator+(const TrendFunction& lhs, const TrendFunction& rhs) {
  if (lhs.kind_ == TrendKind::zero) return rhs;
  if (rhs.kind_ == TrendKind::zero) return lhs;
  TrendFunction f;
  f.kind_ = TrendKind::sum;
  f.terms_ = std::make_shared<const std::vector<TrendFunction>>(std::vector<TrendFunction>{lhs, rhs});
  return f;
}

TrendFunction TrendFunction::shifted(double y) const {
  require(std::isfinite(y), "shift must be finite");
  TrendFunction f = *this;
  f.shift_ += y;
  return f;
}

TrendFunction TrendFunction::scaled(double k) const {
  require(k > 0.0 && std::isfinite(k), "trend scale must be positive");
  TrendFunction f = *this;
  f.scale_ *= k;
  return f;
}

double TrendFunction::domain_min() const {
  double lo = -kInf;
  switch (kind_) {
    case TrendKind::power:
    case TrendKind::sqrt_drift: lo = 0.0; break;
    case TrendKind::ruin_h: lo = -p2_ * p2_; break;
    case TrendKind::table: lo = xs_->front(); break;
    case TrendKind::sum:
      for (const auto& t : *terms_) lo = std::max(lo, t.domain_min());
      break;
    default: break;
  }
  return lo - shift_;
}

double TrendFunction::domain_max() const {
  double hi = kInf;
  if (kind_ == TrendKind::table) hi = xs_->back();
  if (kind_ == TrendKind::sum)
    for (const auto& t : *terms_) hi = std::min(hi, t.domain_max());
  return hi - shift_;
}

double TrendFunction::eval_unshifted(double t) const {
  switch (kind_) {
    case TrendKind::zero: return 0.0;
    case TrendKind::linear: return p0_ * t;
    case TrendKind::power:
      require(t >= 0.0, "power trend is defined for t >= 0");
      return p0_ * std::pow(t, p1_);
    case TrendKind::abs_power_two_sided: return p0_ * std::pow(std::abs(t), p1_);
    case TrendKind::ruin_h: {
      const double r = p2_;
      require(t >= -r * r * (1.0 + 1e-12), "ruin_h is defined for t >= -r^2");
      const double d = std::sqrt(std::max(t + r * r, 0.0)) - r;
      return p0_ / (p1_ * p1_) * d * d;
    }
    case TrendKind::sqrt_drift:
      require(t >= 0.0, "sqrt_drift is defined for t >= 0");
      return p0_ * t - 2.0 * p1_ * std::sqrt(t);
    case TrendKind::table: {
      const auto& x = *xs_;
      const auto& y = *ys_;
      require(t >= x.front() - 1e-12 && t <= x.back() + 1e-12, "table trend evaluated outside its range");
      if (x.size() == 1) return y.front();
      const auto it = std::upper_bound(x.begin(), x.end(), t);
      if (it == x.begin()) return y.front();
      if (it == x.end()) return y.back();
      const std::size_t j = static_cast<std::size_t>(it - x.begin());
      const double w = (t - x[j - 1]) / (x[j] - x[j - 1]);
      return y[j - 1] + w * (y[j] - y[j - 1]);
    }
    case TrendKind::sum: {
      double s = 0.0;
      for (const auto& term : *terms_) s += term(t);
      return s;
    }
  }
  return 0.0;
}

double TrendFunction::operator()(double t) const { return scale_ * eval_unshifted(t + shift_); }

std::vector<double> TrendFunction::values(const Grid& grid) const {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = (*this)(grid[i]);
  return out;
}

double TrendFunction::infimum(double x1, double x2) const {
  require(x1 <= x2, "infimum needs x1 <= x2");
  if (kind_ == TrendKind::zero) return 0.0;
  if (std::isinf(x2)) {
    // Every admissible kind grows at infinity except zero/table; search a
    // range wide enough that f has clearly left its minimum behind.
    double hi = std::max(x1, 0.0) + 1.0;
    const double start = (*this)(std::max(x1, std::min(0.0, hi)));
    while (hi < 1e8 && (*this)(hi) < std::max(start, 0.0) + 50.0) hi *= 2.0;
    x2 = hi;
  }
  if (std::isinf(x1)) {
    double lo = std::min(x2, 0.0) - 1.0;
    const double start = (*this)(std::min(x2, std::max(0.0, lo)));
    while (lo > -1e8 && (*this)(lo) < std::max(start, 0.0) + 50.0) lo *= 2.0;
    x1 = lo;
  }
  if (x1 == x2) return (*this)(x1);

  constexpr int kSamples = 4001;
  double best = kInf;
  double best_t = x1;
  auto consider = [&](double t) {
    if (t < x1 || t > x2) return;
    const double v = (*this)(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  };
  for (int i = 0; i < kSamples; ++i) consider(x1 + (x2 - x1) * i / (kSamples - 1));
  consider(0.0);
  consider(-shift_);
  const double cell = (x2 - x1) / (kSamples - 1);
  const double lo = std::max(x1, best_t - cell);
  const double hi = std::min(x2, best_t + cell);
  if (hi > lo) {
    const auto r = boost::math::tools::brent_find_minima([this](double t) { return (*this)(t); }, lo, hi, 52);
    best = std::min(best, r.second);
  }
  return best;
}

std::string TrendFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case TrendKind::zero: os << "zero"; break;
    case TrendKind::linear: os << "linear(c=" << p0_ << ")"; break;
    case TrendKind::power: os << "power(c=" << p0_ << ",gamma=" << p1_ << ")"; break;
    case TrendKind::abs_power_two_sided: os << "abs_power_two_sided(c=" << p0_ << ",gamma=" << p1_ << ")"; break;
    case TrendKind::ruin_h: os << "ruin_h(delta=" << p0_ << ",sigma=" << p1_ << ",r=" << p2_ << ")"; break;
    case TrendKind::sqrt_drift: os << "sqrt_drift(c=" << p0_ << ",k=" << p1_ << ")"; break;
    case TrendKind::table: os << "table(n=" << xs_->size() << ")"; break;
    case TrendKind::sum: os << (*terms_)[0].describe() << "+" << (*terms_)[1].describe(); break;
  }
  if (scale_ != 1.0) os << "[scale=" << scale_ << "]";
  if (shift_ != 0.0) os << "[shift=" << shift_ << "]";
  return os.str();
}

ProbeReport c0star_probe(const TrendFunction& f, double eps1, double eps2, std::span<const double> probes) {
  ProbeReport report;
  if (!(eps1 > 0.0 && eps1 < eps2) || probes.size() < 2) return report;
  for (const double t : probes) {
    const double v = f(t);
    report.rows.push_back({t, v / std::pow(t, eps1), v / std::pow(t, eps2)});
  }
  report.lower_growth_ok = true;
  report.upper_decay_ok = true;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& p = report.rows[i - 1];
    const auto& q = report.rows[i];
    if (!(q.ratio_lower > p.ratio_lower && q.ratio_lower > 0.0)) report.lower_growth_ok = false;
    if (!(q.ratio_upper < p.ratio_upper || q.ratio_upper <= 0.0)) report.upper_decay_ok = false;
  }
  report.pass = report.lower_growth_ok && report.upper_decay_ok;
  return report;
}

}  // namespace gex
