#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gauss_extremes/asymptotics.hpp"
#include "gauss_extremes/constants_provider.hpp"
#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/normal_tail.hpp"
#include "gauss_extremes/quadrature.hpp"

using namespace gex;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const ClosedFormConstants closed;

// Answers every request with 1; for branch logic only.
class UnitConstants final : public ConstantsProvider {
 public:
  std::optional<ConstantValue> pickands(double) const override { return ConstantValue{1.0}; }
  std::optional<ConstantValue> piterbarg(double, double, const TrendFunction&, double, double) const override {
    return ConstantValue{1.0};
  }
};

double psi_oracle(double u) { return 0.5 * std::erfc(u / std::numbers::sqrt2); }

}  // namespace

TEST_CASE("normal tail") {
  CHECK(normal_tail(0.0) == 0.5);
  // quadrature of the density over [1, 40]
  const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); }, 1.0, 40.0, 15, 1e-15);
  CHECK(normal_tail(1.0) == doctest::Approx(q).epsilon(1e-12));
  CHECK(normal_tail(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-13));
  for (double u : {-30.0, -5.0, -1.0, 0.5, 3.0, 10.0, 20.0, 30.0}) {
    const long double ref = 0.5L * std::erfc(static_cast<long double>(u) / std::sqrt(2.0L));
    CHECK(std::abs(normal_tail(u) / static_cast<double>(ref) - 1.0) < 1e-12);
  }
  for (double u : {5.0, 8.0, 10.0}) {
    const double mills = normal_tail(u) * std::sqrt(2.0 * std::numbers::pi) * u * std::exp(0.5 * u * u);
    CHECK(std::abs(mills - 1.0) < 0.05);
  }
  CHECK(std::isfinite(log_normal_tail(60.0)));
  CHECK(log_normal_tail(60.0) == doctest::Approx(-0.5 * 3600.0 - std::log(60.0 * std::sqrt(2.0 * std::numbers::pi))).epsilon(1e-3));
}

TEST_CASE("classic nonstationary") {
  RegimeParams p;
  p.alpha = 1.5;
  p.beta = 1.0;
  p.u = 3.0;
  auto r = classic_nonstationary(p, closed);
  CHECK(r.branch == "alpha>beta");
  CHECK(r.value == doctest::Approx(psi_oracle(3.0)));

  p.alpha = 1.0;
  p.beta = 2.0;
  p.u = 5.0;
  r = classic_nonstationary(p, closed);
  CHECK(r.branch == "alpha<beta");
  CHECK(r.constant == doctest::Approx(std::tgamma(1.5)));
  CHECK(r.constant == doctest::Approx(0.8862).epsilon(1e-4));
  CHECK(r.value == doctest::Approx(std::tgamma(1.5) * 5.0 * psi_oracle(5.0)));

  double first = 0.0;
  for (double u : {10.0, 20.0, 40.0}) {
    p.u = u;
    const auto s = classic_nonstationary(p, closed);
    const double k = std::exp(s.log_value - log_normal_tail(u)) / u;
    if (first == 0.0) first = k;
    CHECK(k == doctest::Approx(first).epsilon(1e-10));
  }

  p.beta = 1.0;
  CHECK_THROWS_AS(classic_nonstationary(p, NoConstants{}), ConstantUnavailable);
}

TEST_CASE("locally stationary trend") {
  const double alpha = 1.0, a = 1.3, c = 0.7, u = 4.0;
  const auto b = locally_stationary_trend(u, alpha, a, c, 1.0, T0Position::left_boundary, 0.0, closed);
  // c^{-1} a^{1/alpha} H_alpha u^{2/alpha - 1} Psi(u)
  CHECK(b.value == doctest::Approx(std::pow(a, 1.0 / alpha) / c * u * psi_oracle(u)));
  const auto i = locally_stationary_trend(u, alpha, a, c, 1.0, T0Position::interior, 0.0, closed);
  CHECK(i.value == doctest::Approx(2.0 * b.value));

  const auto flat = locally_stationary_trend(u, 1.5, a, c, 0.5, T0Position::interior, 0.3, closed);
  CHECK(flat.branch == "alpha>2gamma");
  CHECK(flat.value == doctest::Approx(psi_oracle(u - 0.3)));

  // alpha = 2 gamma = 2: P^{ct}_{2,a}[0, inf) = Phi(m) + phi(m)/m, m = c / sqrt(2a)
  const auto eq = locally_stationary_trend(u, 2.0, a, c, 1.0, T0Position::left_boundary, 0.0, closed);
  CHECK(eq.branch == "alpha=2gamma");
  const double m = c / std::sqrt(2.0 * a);
  CHECK(eq.constant == doctest::Approx(normal_cdf(m) + normal_pdf(m) / m));
  CHECK(eq.value == doctest::Approx(eq.constant * psi_oracle(u)));

  // value proportional to c^{-1/gamma} on the alpha < 2 gamma branch
  const auto c1 = locally_stationary_trend(u, 1.0, a, 1.0, 2.0, T0Position::interior, 0.0, closed);
  const auto c4 = locally_stationary_trend(u, 1.0, a, 4.0, 2.0, T0Position::interior, 0.0, closed);
  CHECK(c4.value / c1.value == doctest::Approx(0.5));
}

TEST_CASE("multi peak") {
  const Peak p{1.0, 0.5, 2.0, T0Position::interior};
  const std::vector<Peak> one{p};
  const std::vector<Peak> two{p, p};
  const auto single = locally_stationary_trend(3.0, 1.0, 1.0, 0.5, 2.0, T0Position::interior, 0.1, closed);
  CHECK(locally_stationary_multi_peak(3.0, 1.0, one, 0.1, closed).value == doctest::Approx(single.value));
  CHECK(locally_stationary_multi_peak(3.0, 1.0, two, 0.1, closed).value == doctest::Approx(2.0 * single.value));
  const std::vector<Peak> mixed{p, Peak{1.0, 0.5, 1.0, T0Position::interior}};
  CHECK_THROWS_AS(locally_stationary_multi_peak(3.0, 1.0, mixed, 0.1, closed), Unsupported);

  // sine trend: (sum a_j^{1/alpha}) H_alpha T / sqrt(2 c pi) u^{2/alpha - 1/2} Psi(u - c)
  const double alpha = 1.0, c = 0.8, T = 2.0, u = 6.0;
  const int n = 3;
  const auto peaks = sine_trend_peaks(alpha, c, T, n);
  double sum = 0.0;
  for (int j = 1; j <= n; ++j) sum += std::pow(0.5 * std::pow((4.0 * j + 1.0) * T / 4.0, -alpha), 1.0 / alpha);
  const double oracle = sum * T / std::sqrt(2.0 * c * std::numbers::pi) * std::pow(u, 2.0 / alpha - 0.5) *
                        psi_oracle(u - c);
  CHECK(locally_stationary_multi_peak(u, alpha, peaks, c, closed).value == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("nonstationary trend") {
  RegimeParams p;
  p.alpha = 1.5;
  p.beta = 1.0;
  p.gamma = 1.0;
  p.sigma = 0.8;
  p.g_m = 0.2;
  p.u = 4.0;
  const auto r = nonstationary_trend(p, closed);
  CHECK(r.branch == "alpha>beta*");
  CHECK(r.value == doctest::Approx(psi_oracle((4.0 - 0.2) / 0.8)));

  // both terms present at beta = 2 gamma: the integral drops
  RegimeParams both;
  both.alpha = 1.0;
  both.beta = 2.0;
  both.gamma = 1.0;
  RegimeParams only_b = both;
  only_b.gamma = 5.0;
  CHECK(integrate_exp_neg(nonstationary_f(both), -kInf, kInf).value <
        integrate_exp_neg(nonstationary_f(only_b), -kInf, kInf).value);

  // tent-shaped trend on the bridge: ratio to 2 Psi(c) e^{-2(u^2 - cu)} tends to 1
  const double c = 0.5;
  double prev = kInf;
  for (double u : {3.0, 5.0, 10.0}) {
    const auto t = nonstationary_trend(bridge_tent_params(u, c), closed);
    const double target = std::log(2.0 * psi_oracle(c)) - 2.0 * (u * u - c * u);
    const double dist = std::abs(std::exp(t.log_value - target) - 1.0);
    CHECK(dist < prev);
    prev = dist;
  }
  CHECK(prev < 0.03);
  CHECK(std::isfinite(nonstationary_trend(bridge_tent_params(40.0, c), closed).log_value));
}

TEST_CASE("general constant") {
  const auto f = TrendFunction::linear(1.0);
  CHECK(general_C(EtaTag::zero, 1.0, 0.0, f, -1.0, 1.0, closed).value == 1.0);
  CHECK(general_C(EtaTag::zero, 1.0, 0.0, f, 0.5, 2.0, closed, ZeroEtaForm::sup_exp).value ==
        doctest::Approx(std::exp(-0.5)));
  CHECK(general_C(EtaTag::infinite, 1.0, kInf, TrendFunction::zero(), 0.0, 3.0, closed).value ==
        doctest::Approx(3.0).epsilon(1e-8));
  for (double gamma : {1.0, 2.0, 0.5}) {
    const double cc = 1.7;
    const auto g = general_C(EtaTag::infinite, 2.0, kInf, TrendFunction::abs_power_two_sided(cc, gamma), -kInf, kInf,
                             closed);
    const double oracle = 2.0 * std::tgamma(1.0 / gamma + 1.0) / std::pow(cc, 1.0 / gamma) / std::sqrt(std::numbers::pi);
    CHECK(g.value == doctest::Approx(oracle).epsilon(1e-6));
  }
  // sigma0 rescaling: sigma0^{-2/alpha} H int e^{-f / sigma0^2}
  const auto s = general_C(EtaTag::infinite, 1.0, kInf, TrendFunction::abs_power_two_sided(2.0, 2.0), -kInf, kInf,
                           closed, ZeroEtaForm::unit, 0.5);
  CHECK(s.value == doctest::Approx(4.0 * std::sqrt(std::numbers::pi / 8.0)).epsilon(1e-7));
  CHECK_THROWS_AS(general_C(EtaTag::infinite, 1.0, kInf, f, 1.0, 1.0, closed), PreconditionError);
}

TEST_CASE("bridge with drift") {
  const double c = 0.5;
  double prev = kInf;
  for (double u : {1.0, 2.0, 4.0, 8.0}) {
    const auto r = bridge_drift_asymptotic(u, c, false, closed);
    // 8 u sqrt(pi/8) Psi(2 sqrt(u^2 + cu))
    const double oracle = std::log(u * std::sqrt(8.0 * std::numbers::pi)) + log_normal_tail(2.0 * std::sqrt(u * u + c * u));
    CHECK(r.log_value == doctest::Approx(oracle).epsilon(1e-9));
    const double dist = std::abs(std::exp(r.log_value + 2.0 * (u * u + c * u)) - 1.0);
    CHECK(dist < prev);
    prev = dist;
  }
  const auto half = bridge_drift_asymptotic(2.0, c, true, closed);
  const auto full = bridge_drift_asymptotic(2.0, c, false, closed);
  CHECK(half.value / full.value == doctest::Approx(normal_cdf(c)).epsilon(1e-7));
}

TEST_CASE("ruin") {
  CHECK(ruin_exact(0.0, 1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(ruin_exact(2.0, 1.0, 1.0, 1.0) == doctest::Approx(psi_oracle(3.0 * std::numbers::sqrt2) / psi_oracle(std::numbers::sqrt2)));
  double prev = 1.0;
  for (double u = 0.5; u < 10.0; u += 0.5) {
    const double r = ruin_exact(u, 1.0, 1.0, 1.0);
    CHECK(r < prev);
    prev = r;
  }
  CHECK(piterbarg_identity_rhs(1.0, 1.0, 1.0) == doctest::Approx(12.715).epsilon(1e-4));
  CHECK(piterbarg_identity_rhs(0.0, 1.0, 1.0) == doctest::Approx(2.0));
  const double big = 4.0;
  const double mills = std::sqrt(2.0 * std::numbers::pi) * std::numbers::sqrt2 * big * std::exp(big * big);
  CHECK(piterbarg_identity_rhs(big, 1.0, 1.0) / mills == doctest::Approx(1.0).epsilon(0.05));

  const auto a5 = ruin_asymptotic(5.0, 1.0, 1.0, 1.0, closed);
  CHECK(a5.branch == "ruin");
  const double ratio = a5.value / ruin_exact(5.0, 1.0, 1.0, 1.0);
  CHECK(ratio >= 0.9);
  CHECK(ratio <= 1.1);

  double k0 = 0.0;
  for (double u : {2.0, 4.0, 8.0, 16.0}) {
    const auto a = ruin_asymptotic(u, 1.0, 1.0, 1.0, closed);
    const double k = std::exp(a.log_value - log_normal_tail(std::sqrt(2.0 * u * u + 4.0 * u)));
    if (k0 == 0.0) k0 = k;
    CHECK(k == doctest::Approx(k0).epsilon(1e-10));
  }

  prev = kInf;
  for (double u : {2.0, 4.0, 8.0, 16.0}) {
    const double r = std::exp(ruin_asymptotic(u, 1.0, 1.0, 1.0, closed).log_value - log_ruin_exact(u, 1.0, 1.0, 1.0));
    CHECK(std::abs(r - 1.0) < prev);
    prev = std::abs(r - 1.0);
  }
  CHECK_THROWS_AS(ruin_asymptotic(2.0, 1.0, 1.0, 1.0, NoConstants{}), ConstantUnavailable);
}

TEST_CASE("branch selection is stable inside the tie tolerance") {
  RegimeParams p;
  p.beta = 1.0;
  p.u = 3.0;
  for (double eps : {0.0, 0.4 * kTieTol, -0.4 * kTieTol}) {
    p.alpha = 1.0 + eps;
    CHECK(classic_nonstationary(p, UnitConstants{}).branch == "alpha=beta");
  }
  p.alpha = 1.0 + 3.0 * kTieTol;
  CHECK(classic_nonstationary(p, UnitConstants{}).branch == "alpha>beta");
  CHECK(compare_exponents(1.0, 1.0 + 0.5 * kTieTol) == Comparison::equal);
  CHECK(compare_exponents(1.0, 1.0 + 2.0 * kTieTol) == Comparison::less);
}

TEST_CASE("values are nonnegative and decrease in u") {
  RegimeParams p;
  p.alpha = 1.0;
  p.beta = 2.0;
  double prev = kInf;
  for (double u = 1.0; u <= 30.0; u += 1.0) {
    p.u = u;
    const double v = classic_nonstationary(p, closed).log_value;
    CHECK(v < prev);
    prev = v;
    const auto l = locally_stationary_trend(u, 1.0, 1.0, 1.0, 1.0, T0Position::interior, 0.0, closed);
    CHECK(l.value >= 0.0);
  }
}
