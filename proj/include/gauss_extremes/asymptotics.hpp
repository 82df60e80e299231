#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gauss_extremes/constants_provider.hpp"
#include "gauss_extremes/pickands.hpp"
#include "gauss_extremes/trend.hpp"

namespace gex {

inline constexpr double kTieTol = 1e-9;

enum class Comparison { less, equal, greater };

// x vs y with |x - y| <= tol counted as a tie.
Comparison compare_exponents(double x, double y, double tol = kTieTol);
std::string to_string(Comparison c);

enum class T0Position { interior, left_boundary, right_boundary };
std::string to_string(T0Position p);

struct RegimeParams {
  double alpha = 1.0;
  double a = 1.0;
  double beta = 2.0;
  double b = 1.0;
  double gamma = 1.0;
  double c = 1.0;
  double sigma = 1.0;
  double lambda = 1.0;
  double eta = std::numeric_limits<double>::infinity();
  T0Position t0_position = T0Position::interior;
  double g_m = 0.0;
  double u = 1.0;
  double tie_tol = kTieTol;

  double beta_star() const;
  // -inf for an interior maximiser, 0 on the boundary.
  double upsilon() const;
  // 2 for an interior maximiser, 1 on the boundary.
  double q() const;
};

struct ApproxResult {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
  std::string branch;
  double constant = 0.0;
  ConstantSource constant_source = ConstantSource::closed_form;
  std::optional<ConstantEstimate> estimate;
  double u_power = 0.0;
};

// No trend, sigma(t0) = 1: C0 u^{(2/alpha - 2/beta)+} Psi(u).
ApproxResult classic_nonstationary(const RegimeParams& p, const ConstantsProvider& provider);

// Locally stationary process, single trend peak:
// C_{t0} u^{(2/alpha - 1/gamma)+} Psi(u - g_m).
ApproxResult locally_stationary_trend(double u, double alpha, double a, double c, double gamma, T0Position position,
                                      double g_m, const ConstantsProvider& provider, double tie_tol = kTieTol);

struct Peak {
  double a;
  double c;
  double gamma;
  T0Position position;
};

// Sum of the per-peak constants; all peaks must share gamma.
ApproxResult locally_stationary_multi_peak(double u, double alpha, std::span<const Peak> peaks, double g_m,
                                           const ConstantsProvider& provider, double tie_tol = kTieTol);

// Trend maximal on a whole interval [A, B]:
// H_alpha int_A^B a(t)^{1/alpha} dt u^{2/alpha} Psi(u - g_m).
ApproxResult locally_stationary_plateau(double u, double alpha, const std::function<double(double)>& a_of_t,
                                        double A, double B, double g_m, const ConstantsProvider& provider);

// f(t) = (b/sigma^3)|t|^beta [beta = beta*] + (c/sigma^2)|t|^gamma [2 gamma = beta*].
TrendFunction nonstationary_f(const RegimeParams& p);

// Non-stationary process with trend:
// C0 u^{(2/alpha - 2/beta*)+} Psi((u - g(t0))/sigma).
ApproxResult nonstationary_trend(const RegimeParams& p, const ConstantsProvider& provider);

enum class EtaTag { zero, finite, infinite };
std::string to_string(EtaTag e);

// How the eta = 0 case is evaluated: sup e^{-f} over [x1, x2] when the
// variance maximiser need not lie in the interval, or 1 when it does.
enum class ZeroEtaForm { sup_exp, unit };

struct GeneralConstant {
  double value = 0.0;
  std::string branch;
  ConstantSource source = ConstantSource::closed_form;
  std::optional<ConstantEstimate> estimate;
};

// The constant C of the threshold-dependent family; sigma0 != 1 applies the
// sigma0^{-2/alpha} and sigma0^{-2} rescalings.
GeneralConstant general_C(EtaTag tag, double alpha, double eta, const TrendFunction& f, double x1, double x2,
                          const ConstantsProvider& provider, ZeroEtaForm form = ZeroEtaForm::unit,
                          double sigma0 = 1.0);

// C (u^lambda rho<-(1/u))^{-[eta = inf]} Psi(z), with `scale` =
// u^lambda rho<-(1/u) and z = (u - g(t_u))/sigma(t_u) supplied by the caller.
ApproxResult threshold_family(EtaTag tag, double alpha, double eta, const TrendFunction& f, double x1, double x2,
                              double sigma0, double scale, double z, const ConstantsProvider& provider,
                              ZeroEtaForm form = ZeroEtaForm::unit);

// Brownian bridge with trend -c t on [0, 1] (half = false) or [0, 1/2]:
// 8 H_1 u int_{-inf}^{x2} e^{-8t^2} dt Psi(2 sqrt(u^2 + c u)), x2 = inf or c/4.
ApproxResult bridge_drift_asymptotic(double u, double c, bool half_horizon, const ConstantsProvider& provider);

// Brownian bridge with tent trend c/2 - c|t - 1/2|.
RegimeParams bridge_tent_params(double u, double c);

// Peaks of the standardized fBm with trend c sin(2 pi t / T) on [T, (n+1)T].
std::vector<Peak> sine_trend_peaks(double alpha, double c, double T, int n);

// Brownian risk model with constant force of interest.
ApproxResult ruin_asymptotic(double u, double c, double delta, double sigma, const ConstantsProvider& provider);
double ruin_exact(double u, double c, double delta, double sigma);
double log_ruin_exact(double u, double c, double delta, double sigma);
double piterbarg_identity_rhs(double c, double delta, double sigma);

// Build value / log value from C u^power Psi(z).
ApproxResult make_result(double constant, double u, double power, double z);

}  // namespace gex
