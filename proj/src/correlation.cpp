#include "gauss_extremes/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gauss_extremes/errors.hpp"

namespace gex {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw PreconditionError("alpha must lie in (0, 2]");
}

}  // namespace

CorrelationModel CorrelationModel::fbm(double alpha) {
  check_alpha(alpha);
  CorrelationModel m;
  m.kind_ = ModelKind::fbm;
  m.alpha_ = alpha;
  return m;
}

CorrelationModel CorrelationModel::stationary_power(double alpha, double a) {
  check_alpha(alpha);
  if (!(a > 0.0)) throw PreconditionError("stationary_power needs a > 0");
  CorrelationModel m;
  m.kind_ = ModelKind::stationary_power;
  m.alpha_ = alpha;
  m.a_ = a;
  return m;
}

CorrelationModel CorrelationModel::brownian_bridge() {
  CorrelationModel m;
  m.kind_ = ModelKind::brownian_bridge;
  return m;
}

CorrelationModel CorrelationModel::risk_time_change(double delta, double sigma) {
  if (!(delta > 0.0) || !(sigma > 0.0)) throw PreconditionError("risk model needs delta, sigma > 0");
  CorrelationModel m;
  m.kind_ = ModelKind::risk_time_change;
  m.delta_ = delta;
  m.sigma_ = sigma;
  return m;
}

CorrelationModel CorrelationModel::custom_covariance(Grid grid, std::vector<double> matrix) {
  const std::size_t n = grid.size();
  if (matrix.size() != n * n) throw PreconditionError("custom covariance must be m x m for an m-point grid");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double x = matrix[i * n + j];
      const double y = matrix[j * n + i];
      if (std::abs(x - y) > 1e-12 * std::max({1.0, std::abs(x), std::abs(y)}))
        throw PreconditionError("custom covariance must be symmetric");
    }
  }
  CorrelationModel m;
  m.kind_ = ModelKind::custom_covariance;
  m.custom_grid_ = std::make_shared<const Grid>(std::move(grid));
  m.custom_matrix_ = std::move(matrix);
  return m;
}

std::string CorrelationModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ModelKind::fbm: os << "fbm(alpha=" << alpha_ << ")"; break;
    case ModelKind::stationary_power: os << "stationary_power(alpha=" << alpha_ << ",a=" << a_ << ")"; break;
    case ModelKind::brownian_bridge: os << "brownian_bridge"; break;
    case ModelKind::risk_time_change: os << "risk_time_change(delta=" << delta_ << ",sigma=" << sigma_ << ")"; break;
    case ModelKind::custom_covariance: os << "custom_covariance(m=" << custom_grid_->size() << ")"; break;
  }
  return os.str();
}

double covariance(const CorrelationModel& model, double s, double t) {
  if (!std::isfinite(s) || !std::isfinite(t)) throw PreconditionError("covariance arguments must be finite");
  switch (model.kind()) {
    case ModelKind::fbm: {
      const double a = model.alpha();
      return 0.5 * (std::pow(std::abs(s), a) + std::pow(std::abs(t), a) - std::pow(std::abs(t - s), a));
    }
    case ModelKind::stationary_power:
      return std::exp(-model.a() * std::pow(std::abs(t - s), model.alpha()));
    case ModelKind::brownian_bridge:
      if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0)
        throw PreconditionError("brownian_bridge is defined on [0, 1]");
      return std::min(s, t) - s * t;
    case ModelKind::risk_time_change:
      if (s <= 0.0 || s > 1.0 || t <= 0.0 || t > 1.0)
        throw PreconditionError("risk_time_change is defined on (0, 1]");
      return model.risk_scale() * (1.0 - std::max(s, t));
    case ModelKind::custom_covariance: {
      const Grid& g = *model.custom_grid();
      const auto i = g.index_of(s);
      const auto j = g.index_of(t);
      if (!i || !j) throw PreconditionError("custom covariance queried off its grid");
      return model.custom_matrix()[*i * g.size() + *j];
    }
  }
  return 0.0;
}

std::vector<double> covariance_matrix(const CorrelationModel& model, const Grid& grid) {
  const std::size_t m = grid.size();
  std::vector<double> k(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double c = covariance(model, grid[i], grid[j]);
      k[i * m + j] = c;
      k[j * m + i] = c;
    }
  }
  return k;
}

}  // namespace gex
