#include "gauss_extremes/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/normal_tail.hpp"
#include "gauss_extremes/quadrature.hpp"

namespace gex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConstantValue need_pickands(const ConstantsProvider& provider, double alpha) {
  if (auto v = provider.pickands(alpha)) return *v;
  throw ConstantUnavailable("Pickands constant for alpha = " + std::to_string(alpha) + " is unavailable");
}

ConstantValue need_piterbarg(const ConstantsProvider& provider, double alpha, double a, const TrendFunction& f,
                             double x1, double x2) {
  if (auto v = provider.piterbarg(alpha, a, f, x1, x2)) return *v;
  throw ConstantUnavailable("Piterbarg constant for " + f.describe() + " is unavailable");
}

void check_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw PreconditionError(std::string(what) + " must be positive");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw PreconditionError("alpha must lie in (0, 2]");
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

ApproxResult with_constant(ApproxResult r, const ConstantValue& cv, ConstantSource fallback) {
  r.constant_source = cv.source == ConstantSource::monte_carlo ? ConstantSource::monte_carlo : fallback;
  r.estimate = cv.estimate;
  return r;
}

}  // namespace

Comparison compare_exponents(double x, double y, double tol) {
  if (std::abs(x - y) <= tol) return Comparison::equal;
  return x < y ? Comparison::less : Comparison::greater;
}

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::less: return "less";
    case Comparison::equal: return "equal";
    case Comparison::greater: return "greater";
  }
  return "unknown";
}

std::string to_string(T0Position p) {
  switch (p) {
    case T0Position::interior: return "interior";
    case T0Position::left_boundary: return "left_boundary";
    case T0Position::right_boundary: return "right_boundary";
  }
  return "unknown";
}

std::string to_string(EtaTag e) {
  switch (e) {
    case EtaTag::zero: return "zero";
    case EtaTag::finite: return "finite";
    case EtaTag::infinite: return "infinite";
  }
  return "unknown";
}

double RegimeParams::beta_star() const {
  return compare_exponents(beta, 2.0 * gamma, tie_tol) == Comparison::greater ? 2.0 * gamma : beta;
}

double RegimeParams::upsilon() const { return t0_position == T0Position::interior ? -kInf : 0.0; }

double RegimeParams::q() const { return t0_position == T0Position::interior ? 2.0 : 1.0; }

ApproxResult make_result(double constant, double u, double power, double z) {
  ApproxResult r;
  r.constant = constant;
  r.u_power = power;
  if (!(constant > 0.0)) {
    r.value = 0.0;
    r.log_value = -kInf;
    return r;
  }
  r.log_value = std::log(constant) + power * std::log(u) + log_normal_tail(z);
  r.value = std::exp(r.log_value);
  return r;
}

ApproxResult classic_nonstationary(const RegimeParams& p, const ConstantsProvider& provider) {
  check_alpha(p.alpha);
  check_positive(p.a, "a");
  check_positive(p.b, "b");
  check_positive(p.beta, "beta");
  check_positive(p.u, "u");
  const Comparison cmp = compare_exponents(p.alpha, p.beta, p.tie_tol);
  const double power = positive_part(2.0 / p.alpha - 2.0 / p.beta);
  switch (cmp) {
    case Comparison::less: {
      const auto h = need_pickands(provider, p.alpha);
      const double c0 = std::pow(p.a, 1.0 / p.alpha) * std::pow(p.b, -1.0 / p.beta) *
                        std::tgamma(1.0 / p.beta + 1.0) * h.value;
      auto r = with_constant(make_result(c0, p.u, power, p.u), h, ConstantSource::closed_form);
      r.branch = "alpha<beta";
      return r;
    }
    case Comparison::equal: {
      const auto f = TrendFunction::power(p.b / p.a, p.alpha);
      const auto pc = need_piterbarg(provider, p.alpha, 1.0, f, 0.0, kInf);
      auto r = with_constant(make_result(pc.value, p.u, 0.0, p.u), pc, ConstantSource::closed_form);
      r.branch = "alpha=beta";
      return r;
    }
    case Comparison::greater: {
      auto r = make_result(1.0, p.u, 0.0, p.u);
      r.branch = "alpha>beta";
      return r;
    }
  }
  return {};
}

namespace {

// C_{t0} of a single peak plus the branch label.
std::pair<ConstantValue, std::string> peak_constant(double alpha, double a, double c, double gamma,
                                                    T0Position position, const ConstantsProvider& provider,
                                                    double tie_tol) {
  const double q = position == T0Position::interior ? 2.0 : 1.0;
  const double ups = position == T0Position::interior ? -kInf : 0.0;
  switch (compare_exponents(alpha, 2.0 * gamma, tie_tol)) {
    case Comparison::less: {
      auto h = need_pickands(provider, alpha);
      const double v = q * std::pow(a, 1.0 / alpha) * std::pow(c, -1.0 / gamma) * std::tgamma(1.0 / gamma + 1.0) * h.value;
      return {{v, h.source == ConstantSource::monte_carlo ? ConstantSource::monte_carlo : ConstantSource::closed_form,
               h.estimate},
              "alpha<2gamma"};
    }
    case Comparison::equal: {
      const auto f = TrendFunction::abs_power_two_sided(c, gamma);
      auto pc = need_piterbarg(provider, alpha, a, f, ups, kInf);
      return {pc, "alpha=2gamma"};
    }
    case Comparison::greater: return {{1.0, ConstantSource::closed_form, std::nullopt}, "alpha>2gamma"};
  }
  return {};
}

}  // namespace

ApproxResult locally_stationary_trend(double u, double alpha, double a, double c, double gamma, T0Position position,
                                      double g_m, const ConstantsProvider& provider, double tie_tol) {
  const Peak peak{a, c, gamma, position};
  return locally_stationary_multi_peak(u, alpha, std::span<const Peak>(&peak, 1), g_m, provider, tie_tol);
}

ApproxResult locally_stationary_multi_peak(double u, double alpha, std::span<const Peak> peaks, double g_m,
                                           const ConstantsProvider& provider, double tie_tol) {
  check_alpha(alpha);
  check_positive(u, "u");
  if (peaks.empty()) throw PreconditionError("at least one peak is required");
  const double gamma = peaks.front().gamma;
  for (const auto& pk : peaks) {
    check_positive(pk.a, "a");
    check_positive(pk.c, "c");
    check_positive(pk.gamma, "gamma");
    if (std::abs(pk.gamma - gamma) > tie_tol) throw Unsupported("peaks with different gamma are not supported");
  }
  double total = 0.0;
  std::string branch;
  ConstantSource source = ConstantSource::closed_form;
  std::optional<ConstantEstimate> estimate;
  for (const auto& pk : peaks) {
    auto [cv, br] = peak_constant(alpha, pk.a, pk.c, pk.gamma, pk.position, provider, tie_tol);
    total += cv.value;
    branch = br;
    if (cv.source == ConstantSource::monte_carlo) {
      source = ConstantSource::monte_carlo;
      estimate = cv.estimate;
    }
  }
  auto r = make_result(total, u, positive_part(2.0 / alpha - 1.0 / gamma), u - g_m);
  r.branch = branch;
  r.constant_source = source;
  r.estimate = estimate;
  return r;
}

ApproxResult locally_stationary_plateau(double u, double alpha, const std::function<double(double)>& a_of_t,
                                        double A, double B, double g_m, const ConstantsProvider& provider) {
  check_alpha(alpha);
  check_positive(u, "u");
  if (!(A < B)) throw PreconditionError("plateau needs A < B");
  const auto h = need_pickands(provider, alpha);
  const auto integral = integrate([&](double t) { return std::pow(a_of_t(t), 1.0 / alpha); }, A, B);
  auto r = with_constant(make_result(h.value * integral.value, u, 2.0 / alpha, u - g_m), h, ConstantSource::quadrature);
  r.branch = "plateau";
  return r;
}

TrendFunction nonstationary_f(const RegimeParams& p) {
  const double bs = p.beta_star();
  TrendFunction f = TrendFunction::zero();
  if (compare_exponents(p.beta, bs, p.tie_tol) == Comparison::equal)
    f = f + TrendFunction::abs_power_two_sided(p.b / std::pow(p.sigma, 3.0), p.beta);
  if (compare_exponents(2.0 * p.gamma, bs, p.tie_tol) == Comparison::equal)
    f = f + TrendFunction::abs_power_two_sided(p.c / (p.sigma * p.sigma), p.gamma);
  return f;
}

ApproxResult nonstationary_trend(const RegimeParams& p, const ConstantsProvider& provider) {
  check_alpha(p.alpha);
  check_positive(p.a, "a");
  check_positive(p.b, "b");
  check_positive(p.beta, "beta");
  check_positive(p.c, "c");
  check_positive(p.gamma, "gamma");
  check_positive(p.sigma, "sigma");
  check_positive(p.u, "u");
  const double bs = p.beta_star();
  const TrendFunction f = nonstationary_f(p);
  const double ups = p.upsilon();
  const double z = (p.u - p.g_m) / p.sigma;
  const double power = positive_part(2.0 / p.alpha - 2.0 / bs);
  switch (compare_exponents(p.alpha, bs, p.tie_tol)) {
    case Comparison::less: {
      const auto h = need_pickands(provider, p.alpha);
      const auto integral = integrate_exp_neg(f, ups, kInf);
      const double c0 = std::pow(p.sigma, -2.0 / p.alpha) * std::pow(p.a, 1.0 / p.alpha) * h.value * integral.value;
      auto r = with_constant(make_result(c0, p.u, power, z), h, ConstantSource::quadrature);
      r.branch = "alpha<beta*";
      return r;
    }
    case Comparison::equal: {
      const auto pc = need_piterbarg(provider, p.alpha, p.a / (p.sigma * p.sigma), f, ups, kInf);
      auto r = with_constant(make_result(pc.value, p.u, 0.0, z), pc, ConstantSource::closed_form);
      r.branch = "alpha=beta*";
      return r;
    }
    case Comparison::greater: {
      auto r = make_result(1.0, p.u, 0.0, z);
      r.branch = "alpha>beta*";
      return r;
    }
  }
  return {};
}

GeneralConstant general_C(EtaTag tag, double alpha, double eta, const TrendFunction& f, double x1, double x2,
                          const ConstantsProvider& provider, ZeroEtaForm form, double sigma0) {
  check_alpha(alpha);
  check_positive(sigma0, "sigma0");
  if (!(x1 < x2)) throw PreconditionError("general constant needs x1 < x2");
  const double s2 = 1.0 / (sigma0 * sigma0);
  const TrendFunction fs = sigma0 == 1.0 ? f : f.scaled(s2);
  GeneralConstant out;
  switch (tag) {
    case EtaTag::infinite: {
      const auto h = need_pickands(provider, alpha);
      const auto integral = integrate_exp_neg(fs, x1, x2);
      out.value = std::pow(sigma0, -2.0 / alpha) * h.value * integral.value;
      out.branch = "eta=inf";
      out.source = h.source == ConstantSource::monte_carlo ? ConstantSource::monte_carlo : ConstantSource::quadrature;
      out.estimate = h.estimate;
      return out;
    }
    case EtaTag::finite: {
      check_positive(eta, "eta");
      const auto pc = need_piterbarg(provider, alpha, s2 * eta, fs, x1, x2);
      out.value = pc.value;
      out.branch = "eta finite";
      out.source = pc.source;
      out.estimate = pc.estimate;
      return out;
    }
    case EtaTag::zero:
      out.branch = "eta=0";
      out.value = form == ZeroEtaForm::unit ? 1.0 : sup_exp_neg(fs, x1, x2);
      out.source = form == ZeroEtaForm::unit ? ConstantSource::closed_form : ConstantSource::quadrature;
      return out;
  }
  return out;
}

ApproxResult threshold_family(EtaTag tag, double alpha, double eta, const TrendFunction& f, double x1, double x2,
                              double sigma0, double scale, double z, const ConstantsProvider& provider,
                              ZeroEtaForm form) {
  check_positive(scale, "scale");
  const auto c = general_C(tag, alpha, eta, f, x1, x2, provider, form, sigma0);
  // u^power with u = 1/scale reproduces the factor scale^{-1}.
  auto r = make_result(c.value, 1.0 / scale, tag == EtaTag::infinite ? 1.0 : 0.0, z);
  r.branch = c.branch;
  r.constant_source = c.source;
  r.estimate = c.estimate;
  r.u_power = 0.0;
  return r;
}

ApproxResult bridge_drift_asymptotic(double u, double c, bool half_horizon, const ConstantsProvider& provider) {
  check_positive(u, "u");
  check_positive(c, "c");
  // sigma(t_u) -> 1/2, m*/m(t_u + t) - 1 ~ 2 t^2, 1 - r ~ 2|t - s|, so the
  // family scale is u * rho<-(1/u) = 1/(2u).
  const auto f = TrendFunction::abs_power_two_sided(2.0, 2.0);
  const double x2 = half_horizon ? c / 4.0 : kInf;
  return threshold_family(EtaTag::infinite, 1.0, kInf, f, -kInf, x2, 0.5, 1.0 / (2.0 * u),
                          2.0 * std::sqrt(u * u + c * u), provider);
}

RegimeParams bridge_tent_params(double u, double c) {
  RegimeParams p;
  p.alpha = 1.0;
  p.a = 2.0;
  p.beta = 2.0;
  p.b = 1.0;
  p.gamma = 1.0;
  p.c = c;
  p.sigma = 0.5;
  p.t0_position = T0Position::interior;
  p.g_m = c / 2.0;
  p.u = u;
  return p;
}

std::vector<Peak> sine_trend_peaks(double alpha, double c, double T, int n) {
  check_alpha(alpha);
  check_positive(c, "c");
  check_positive(T, "T");
  if (n < 1) throw PreconditionError("n must be >= 1");
  std::vector<Peak> peaks;
  const double c_eff = 2.0 * c * (std::numbers::pi / T) * (std::numbers::pi / T);
  for (int j = 1; j <= n; ++j) {
    const double a_j = 0.5 * std::pow((4.0 * j + 1.0) * T / 4.0, -alpha);
    peaks.push_back({a_j, c_eff, 2.0, T0Position::interior});
  }
  return peaks;
}

ApproxResult ruin_asymptotic(double u, double c, double delta, double sigma, const ConstantsProvider& provider) {
  check_positive(u, "u");
  check_positive(c, "c");
  check_positive(delta, "delta");
  check_positive(sigma, "sigma");
  const double r = c / delta;
  const auto h = TrendFunction::ruin_h(delta, sigma, r);
  const auto pc = need_piterbarg(provider, 1.0, delta / (sigma * sigma), h, -r * r, kInf);
  const double z = std::sqrt(2.0 * delta * u * u + 4.0 * c * u) / sigma;
  auto res = make_result(pc.value, u, 0.0, z);
  res.branch = "ruin";
  res.constant_source = pc.source;
  res.estimate = pc.estimate;
  return res;
}

double log_ruin_exact(double u, double c, double delta, double sigma) {
  if (!(u >= 0.0)) throw PreconditionError("u must be >= 0");
  check_positive(c, "c");
  check_positive(delta, "delta");
  check_positive(sigma, "sigma");
  const double r = c / delta;
  return log_normal_tail(std::sqrt(2.0 * delta) * (u + r) / sigma) -
         log_normal_tail(std::sqrt(2.0) * c / (sigma * std::sqrt(delta)));
}

double ruin_exact(double u, double c, double delta, double sigma) {
  return std::exp(log_ruin_exact(u, c, delta, sigma));
}

double piterbarg_identity_rhs(double c, double delta, double sigma) {
  if (!(c >= 0.0)) throw PreconditionError("c must be >= 0");
  check_positive(delta, "delta");
  check_positive(sigma, "sigma");
  return 1.0 / normal_tail(std::sqrt(2.0) * c / (sigma * std::sqrt(delta)));
}

}  // namespace gex
