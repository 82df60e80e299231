#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gauss_extremes/grid.hpp"

namespace gex {

enum class TrendKind { zero, linear, power, abs_power_two_sided, ruin_h, sqrt_drift, table, sum };

// The function f in exp(sqrt(2a) B(t) - a|t|^alpha - f(t)).
//
//  zero                      0
//  linear(c)                 c t
//  power(c, g)               c t^g, t >= 0
//  abs_power_two_sided(c, g) c |t|^g
//  ruin_h(delta, sigma, r)   (delta/sigma^2) (sqrt(t + r^2) - r)^2, t >= -r^2
//  sqrt_drift(c, k)          c t - 2 k sqrt(t), t >= 0
//  table(points, values)     piecewise linear interpolation
//
// shifted(y) gives t -> f(t + y), scaled(k) gives k f; operator+ adds.
class TrendFunction {
 public:
  static TrendFunction zero();
  static TrendFunction linear(double c);
  static TrendFunction power(double c, double gamma);
  static TrendFunction abs_power_two_sided(double c, double gamma);
  static TrendFunction ruin_h(double delta, double sigma, double r);
  static TrendFunction sqrt_drift(double c, double k);
  static TrendFunction table(std::vector<double> points, std::vector<double> values);

  TrendKind kind() const noexcept { return kind_; }
  double shift() const noexcept { return shift_; }
  // Kind parameters in declaration order, e.g. (c, gamma) or (delta, sigma, r).
  std::array<double, 3> parameters() const noexcept { return {p0_, p1_, p2_}; }

  double operator()(double t) const;
  std::vector<double> values(const Grid& grid) const;

  // Smallest admissible argument (-inf when unbounded below).
  double domain_min() const;
  double domain_max() const;

  TrendFunction shifted(double y) const;
  // t -> k f(t), k > 0.
  TrendFunction scaled(double k) const;
  double scale() const noexcept { return scale_; }
  friend TrendFunction operator+(const TrendFunction& lhs, const TrendFunction& rhs);

  // inf of f over [x1, x2] (x2 may be +inf); used for sup e^{-f}.
  double infimum(double x1, double x2) const;

  std::string describe() const;

 private:
  TrendFunction() = default;
  double eval_unshifted(double t) const;

  TrendKind kind_ = TrendKind::zero;
  double p0_ = 0.0;
  double p1_ = 0.0;
  double p2_ = 0.0;
  double shift_ = 0.0;
  double scale_ = 1.0;
  std::shared_ptr<const std::vector<double>> xs_;
  std::shared_ptr<const std::vector<double>> ys_;
  std::shared_ptr<const std::vector<TrendFunction>> terms_;
};

struct ProbeRow {
  double t;
  double ratio_lower;  // f(t) / t^eps1
  double ratio_upper;  // f(t) / t^eps2
};

struct ProbeReport {
  std::vector<ProbeRow> rows;
  bool lower_growth_ok = false;  // f / t^eps1 increasing along the probes
  bool upper_decay_ok = false;   // f / t^eps2 decreasing along the probes
  bool pass = false;
};

// Numeric growth check that f sits between |t|^eps1 and |t|^eps2 at
// infinity. Diagnostic only; probes are used as positive arguments.
ProbeReport c0star_probe(const TrendFunction& f, double eps1, double eps2, std::span<const double> probes);

}  // namespace gex
