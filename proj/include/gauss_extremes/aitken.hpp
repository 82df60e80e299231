#pragma once

#include <array>
#include <string>

namespace gex {

struct AitkenFit {
  bool ok = false;
  double limit = 0.0;
  double variance = 0.0;  // delta-method variance of the limit
  double kappa = 0.0;     // fitted order, p(h) = p0 - A h^kappa
  std::string note;
};

// Three estimates at steps 4h, 2h, h (coarse first) with the covariance of
// the three means. Requires both successive differences to exceed two
// standard errors and their ratio to lie in (0, 1).
AitkenFit aitken_nested(const std::array<double, 3>& p, const std::array<double, 9>& cov);

}  // namespace gex
