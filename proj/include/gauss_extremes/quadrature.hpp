#pragma once

#include <functional>

#include "gauss_extremes/trend.hpp"

namespace gex {

inline constexpr double kQuadratureAbsTol = 1e-8;
inline constexpr double kTruncationLevel = 40.0;

struct QuadratureResult {
  double value;
  double error;
  double lower;  // interval actually integrated after truncation
  double upper;
};

// int_{x1}^{x2} e^{-f(t)} dt for x1 < x2, either end possibly infinite.
// Infinite ends are cut where f exceeds 40; the adaptive Gauss-Kronrod
// error estimate must come in under 1e-8 or QuadratureError is thrown.
QuadratureResult integrate_exp_neg(const TrendFunction& f, double x1, double x2);

// Adaptive integral of a smooth integrand on a finite interval.
QuadratureResult integrate(const std::function<double(double)>& g, double a, double b);

// sup over [x1, x2] of e^{-f}.
double sup_exp_neg(const TrendFunction& f, double x1, double x2);

}  // namespace gex
