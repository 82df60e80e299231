#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gauss_extremes/grid.hpp"

namespace gex {

enum class ModelKind { fbm, stationary_power, brownian_bridge, risk_time_change, custom_covariance };

// Kernel family of the underlying centered Gaussian process.
//
//  fbm(alpha)                  two-sided fBm, 1/2(|s|^a + |t|^a - |t-s|^a)
//  stationary_power(alpha, a)  unit variance, r(tau) = exp(-a |tau|^alpha)
//  brownian_bridge             min(s,t) - s t on [0,1]
//  risk_time_change(d, sigma)  sigma^2/(2 d) (1 - max(s,t)) on (0,1]; the
//                              discounted Brownian risk reserve after the
//                              time change s = exp(-2 d t)
//  custom_covariance(K)        K is the covariance on one fixed grid
class CorrelationModel {
 public:
  static CorrelationModel fbm(double alpha);
  static CorrelationModel stationary_power(double alpha, double a);
  static CorrelationModel brownian_bridge();
  static CorrelationModel risk_time_change(double delta, double sigma);
  // Row-major m x m matrix tied to `grid`.
  static CorrelationModel custom_covariance(Grid grid, std::vector<double> matrix);

  ModelKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double a() const noexcept { return a_; }
  double delta() const noexcept { return delta_; }
  double sigma() const noexcept { return sigma_; }

  // Variance scale sigma^2/(2 delta) of the risk model.
  double risk_scale() const noexcept { return sigma_ * sigma_ / (2.0 * delta_); }

  const Grid* custom_grid() const noexcept { return custom_grid_.get(); }
  const std::vector<double>& custom_matrix() const noexcept { return custom_matrix_; }

  std::string describe() const;

 private:
  CorrelationModel() = default;

  ModelKind kind_ = ModelKind::fbm;
  double alpha_ = 1.0;
  double a_ = 1.0;
  double delta_ = 1.0;
  double sigma_ = 1.0;
  std::shared_ptr<const Grid> custom_grid_;
  std::vector<double> custom_matrix_;
};

// Cov(X(s), X(t)). Throws PreconditionError outside the model's domain.
double covariance(const CorrelationModel& model, double s, double t);

// Row-major covariance matrix on the grid.
std::vector<double> covariance_matrix(const CorrelationModel& model, const Grid& grid);

}  // namespace gex
