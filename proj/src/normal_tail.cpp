#include "gauss_extremes/normal_tail.hpp"

#include <cmath>
#include <numbers>

namespace gex {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Asymptotic series of log(u sqrt(2 pi) e^{u^2/2} Psi(u)); at u >= 30 the
// truncation error is below 1e-15.
double log_mills_correction(double u) {
  const double z = 1.0 / (u * u);
  const double s = 1.0 - z * (1.0 - 3.0 * z * (1.0 - 5.0 * z * (1.0 - 7.0 * z * (1.0 - 9.0 * z))));
  return std::log(s);
}

}  // namespace

double normal_tail(double u) { return 0.5 * std::erfc(u * kInvSqrt2); }

double log_normal_tail(double u) {
  if (u < 30.0) return std::log(normal_tail(u));
  return -0.5 * u * u - std::log(u * std::sqrt(2.0 * std::numbers::pi)) + log_mills_correction(u);
}

double normal_cdf(double x) { return normal_tail(-x); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace gex
