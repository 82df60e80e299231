#include "gauss_extremes/aitken.hpp"

#include <cmath>

namespace gex {

AitkenFit aitken_nested(const std::array<double, 3>& p, const std::array<double, 9>& cov) {
  AitkenFit fit;
  auto diff_var = [&](int i, int j) { return cov[i * 3 + i] + cov[j * 3 + j] - 2.0 * cov[i * 3 + j]; };
  const double d1 = p[1] - p[0];
  const double d2 = p[2] - p[1];
  auto significant = [](double d, double var) { return d > 0.0 && d > 2.0 * std::sqrt(std::max(var, 0.0)); };
  if (!significant(d1, diff_var(0, 1)) || !significant(d2, diff_var(1, 2))) {
    fit.note = "grid differences not significant";
    return fit;
  }
  const double rho = d2 / d1;
  if (!(rho > 0.0 && rho < 1.0)) {
    fit.note = "ratio of differences outside (0, 1)";
    return fit;
  }
  const double dd = d1 - d2;
  const double q = d2 / dd;
  const double g[3] = {q * q, -2.0 * q - 2.0 * q * q, 1.0 + 2.0 * q + q * q};
  double var = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) var += g[i] * g[j] * cov[i * 3 + j];
  fit.ok = true;
  fit.limit = p[2] + d2 * q;
  fit.variance = std::max(var, 0.0);
  fit.kappa = -std::log2(rho);
  return fit;
}

}  // namespace gex
