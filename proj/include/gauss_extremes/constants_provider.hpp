#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gauss_extremes/pickands.hpp"
#include "gauss_extremes/trend.hpp"

namespace gex {

enum class ConstantSource { closed_form, quadrature, monte_carlo };

std::string to_string(ConstantSource s);

struct ConstantValue {
  double value = 0.0;
  ConstantSource source = ConstantSource::closed_form;
  std::optional<ConstantEstimate> estimate;
};

// Supplies Pickands and Piterbarg constants to the asymptotic formulas.
// nullopt means "not available from this provider".
class ConstantsProvider {
 public:
  virtual ~ConstantsProvider() = default;
  virtual std::optional<ConstantValue> pickands(double alpha) const = 0;
  // P^f_{alpha,a}[x1, x2]; x1 may be -inf and x2 +inf.
  virtual std::optional<ConstantValue> piterbarg(double alpha, double a, const TrendFunction& f, double x1,
                                                 double x2) const = 0;
};

// Known exact values:
//   H_1 = 1, H_2 = 1/sqrt(pi)
//   P^{ct}_{1,a}[0,inf) = 1 + a/c, and the two-sided |t| version
//   P^{ct}_{2,a}[0,inf) = Phi(m) + phi(m)/m, m = c/sqrt(2a)
//   P^{ct^2}_{2,a}[0,inf) = (1 + sqrt((a+c)/c))/2, two-sided sqrt((a+c)/c)
//   P^h_{1,delta/sigma^2}[-r^2,inf) = e^{-k}/Psi(sqrt(2k)), k = r^2 delta/sigma^2
//   any constant over the single point [0, 0] is 1
class ClosedFormConstants final : public ConstantsProvider {
 public:
  std::optional<ConstantValue> pickands(double alpha) const override;
  std::optional<ConstantValue> piterbarg(double alpha, double a, const TrendFunction& f, double x1,
                                         double x2) const override;
};

struct MonteCarloSettings {
  double grid_step = 1.0 / 512.0;
  std::uint64_t n = 100000;
  std::uint64_t seed = 1;
  std::vector<double> pickands_schedule{4.0, 8.0, 16.0};
  std::vector<double> piterbarg_schedule{2.0, 4.0, 8.0, 16.0, 32.0};
  double tol = 0.01;
  EstimatorOptions options{Estimator::shift_average, {}, true};
};

// Estimates constants on demand and caches them per (kind, parameters).
class MonteCarloConstants final : public ConstantsProvider {
 public:
  explicit MonteCarloConstants(MonteCarloSettings settings = {});
  std::optional<ConstantValue> pickands(double alpha) const override;
  std::optional<ConstantValue> piterbarg(double alpha, double a, const TrendFunction& f, double x1,
                                         double x2) const override;
  const MonteCarloSettings& settings() const noexcept { return settings_; }

 private:
  MonteCarloSettings settings_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, ConstantValue> cache_;
};

// First provider that answers wins.
class CompositeConstants final : public ConstantsProvider {
 public:
  explicit CompositeConstants(std::vector<std::shared_ptr<const ConstantsProvider>> chain);
  std::optional<ConstantValue> pickands(double alpha) const override;
  std::optional<ConstantValue> piterbarg(double alpha, double a, const TrendFunction& f, double x1,
                                         double x2) const override;

 private:
  std::vector<std::shared_ptr<const ConstantsProvider>> chain_;
};

// A provider with nothing in it; every MC-only branch throws.
class NoConstants final : public ConstantsProvider {
 public:
  std::optional<ConstantValue> pickands(double) const override { return std::nullopt; }
  std::optional<ConstantValue> piterbarg(double, double, const TrendFunction&, double, double) const override {
    return std::nullopt;
  }
};

}  // namespace gex
