#include <doctest.h>

#include <cmath>
#include <vector>

#include "gauss_extremes/errors.hpp"
#include "gauss_extremes/parallel.hpp"
#include "gauss_extremes/pickands.hpp"
#include "gauss_extremes/reference.hpp"
#include "gauss_extremes/trend.hpp"

using namespace gex;

namespace {

double psi(double u) { return 0.5 * std::erfc(u / std::sqrt(2.0)); }
constexpr double kH = 1.0 / 512.0;

}  // namespace

TEST_CASE("c0star probe") {
  const std::vector<double> probes{10.0, 100.0, 1000.0, 10000.0};
  CHECK(c0star_probe(TrendFunction::linear(1.0), 0.5, 2.0, probes).pass);
  CHECK_FALSE(c0star_probe(TrendFunction::zero(), 0.5, 2.0, probes).pass);
  CHECK(c0star_probe(TrendFunction::ruin_h(1.0, 1.0, 1.0), 0.5, 2.0, probes).pass);
  // h(t) / t -> delta / sigma^2
  const auto h = TrendFunction::ruin_h(2.0, 1.0, 1.0);
  CHECK(h(1e8) / 1e8 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("trend functions") {
  const auto f = TrendFunction::sqrt_drift(1.0, 1.0);
  CHECK(f(4.0) == doctest::Approx(0.0));
  CHECK(f(1.0) == doctest::Approx(-1.0));
  CHECK(f.shifted(0.5)(0.5) == doctest::Approx(-1.0));
  CHECK(TrendFunction::abs_power_two_sided(2.0, 2.0)(-0.5) == doctest::Approx(0.5));
  CHECK(TrendFunction::ruin_h(1.0, 1.0, 1.0)(-1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(TrendFunction::table({-1.0, 0.0, 1.0}, {1.0, 0.5, 2.0}), PreconditionError);
  const auto t = TrendFunction::table({-1.0, 0.0, 1.0}, {1.0, 0.0, 2.0});
  CHECK(t(0.5) == doctest::Approx(1.0));
}

TEST_CASE("piterbarg with zero trend is the pickands estimate") {
  const auto p = piterbarg_estimate(1.0, 1.0, TrendFunction::zero(), 0.0, 2.0, kH, 2000, 5);
  const auto h = pickands_estimate(1.0, 2.0, kH, 2000, 5);
  CHECK(p.value == h.value);
  CHECK(p.std_error == h.std_error);
}

TEST_CASE("single point interval") {
  const auto h = pickands_estimate(1.3, 0.0, 0.0, 100, 1);
  CHECK(h.value == doctest::Approx(1.0));
}

TEST_CASE("pickands limits") {
  const double schedule[] = {4.0, 8.0, 16.0};
  const auto h1 = pickands_limit(1.0, kH, 20000, 7, schedule);
  CHECK(h1.extrapolated);
  CHECK(std::abs(h1.value - 1.0) <= 0.05);
  const auto h2 = pickands_limit(2.0, kH, 20000, 7, schedule);
  CHECK(std::abs(h2.value - 1.0 / std::sqrt(M_PI)) <= 0.03);

  const auto small = pickands_limit(0.5, 1.0 / 128.0, 2000, 3, schedule);
  const auto large = pickands_limit(0.5, 1.0 / 128.0, 8000, 3, schedule);
  CHECK(small.value > 0.0);
  CHECK(std::isfinite(small.value));
  CHECK(large.std_error < small.std_error);

  const double bad[] = {8.0, 4.0};
  CHECK_THROWS_AS(pickands_limit(1.0, kH, 100, 1, bad), PreconditionError);
}

TEST_CASE("lower bound when the interval holds zero") {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto e = piterbarg_estimate(alpha, 1.0, TrendFunction::linear(1.0), -1.0, 3.0, 1.0 / 128.0, 3000, 4);
    CHECK(e.value >= 1.0 - 3.0 * e.std_error);
  }
}

TEST_CASE("shift identity with common random numbers") {
  // P^f[x1, x2] = P^{f_y}[x1 - y, x2 - y], y a whole number of grid steps
  const double h = 1.0 / 256.0;
  const auto f = TrendFunction::linear(1.0);
  for (double alpha : {1.0, 1.5}) {
    const auto p = piterbarg_estimate(alpha, 1.0, f, 0.0, 4.0, h, 20000, 8);
    const auto q = piterbarg_estimate(alpha, 1.0, f.shifted(0.5), -0.5, 3.5, h, 20000, 8);
    CHECK(std::abs(p.value - q.value) <= 3.0 * std::hypot(p.std_error, q.std_error));
  }
}

TEST_CASE("exponential shift law for a linear trend") {
  // P^{ct}[x, T] = e^{-cx} P^{ct}[0, T - x]
  const double c = 1.0, x = 0.5, T = 4.0, h = 1.0 / 256.0;
  const auto f = TrendFunction::linear(c);
  const auto p = piterbarg_estimate(1.0, 1.0, f, x, T, h, 20000, 12);
  const auto q = piterbarg_estimate(1.0, 1.0, f, 0.0, T - x, h, 20000, 13);
  const double ratio = p.value / q.value;
  const double rel = std::hypot(p.std_error / p.value, q.std_error / q.value);
  CHECK(std::abs(ratio / std::exp(-c * x) - 1.0) <= 3.0 * rel);
}

TEST_CASE("monotone in interval and grid") {
  const auto f = TrendFunction::linear(0.5);
  EstimatorOptions direct;
  direct.estimator = Estimator::direct;
  // The walk on [0, T] is a prefix of the walk on [0, T'], so the direct
  // estimator is monotone path by path.
  const auto a = piterbarg_estimate(1.0, 1.0, f, 0.0, 2.0, 1.0 / 128.0, 5000, 3, direct);
  const auto b = piterbarg_estimate(1.0, 1.0, f, 0.0, 4.0, 1.0 / 128.0, 5000, 3, direct);
  CHECK(b.value >= a.value);

  const auto nested = piterbarg_estimate_nested(1.5, 1.0, f, 0.0, 2.0, 1.0 / 256.0, {4, 2, 1}, 5000, 3, direct);
  CHECK(nested[1].value >= nested[0].value);
  CHECK(nested[2].value >= nested[1].value);

  const auto s = piterbarg_estimate_nested(1.5, 1.0, f, 0.0, 2.0, 1.0 / 256.0, {4, 2, 1}, 20000, 3);
  for (int k = 1; k < 3; ++k)
    CHECK(s[k].value >= s[k - 1].value - 3.0 * std::hypot(s[k].std_error, s[k - 1].std_error));
}

TEST_CASE("shift average and direct estimators agree") {
  const auto f = TrendFunction::linear(1.0);
  EstimatorOptions direct;
  direct.estimator = Estimator::direct;
  const auto a = piterbarg_estimate(1.2, 1.0, f, 0.0, 2.0, 1.0 / 128.0, 40000, 31, direct);
  const auto b = piterbarg_estimate(1.2, 1.0, f, 0.0, 2.0, 1.0 / 128.0, 40000, 32);
  CHECK(std::abs(a.value - b.value) <= 4.0 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("direct estimator with the dense sampler matches the serial reference") {
  const auto f = TrendFunction::linear(1.0);
  EstimatorOptions opts;
  opts.estimator = Estimator::direct;
  opts.sampler.force_dense = true;
  const auto a = piterbarg_estimate(0.8, 1.0, f, 0.0, 1.0, 1.0 / 32.0, 3000, 17, opts);
  const auto b = reference::piterbarg_direct(0.8, 1.0, f, 0.0, 1.0, 1.0 / 32.0, 3000, 17);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
}

TEST_CASE("same estimate for any worker count") {
  const auto f = TrendFunction::linear(1.0);
  set_worker_count(1);
  const auto a = piterbarg_estimate(1.5, 1.0, f, 0.0, 3.0, 1.0 / 128.0, 5000, 2);
  set_worker_count(3);
  const auto b = piterbarg_estimate(1.5, 1.0, f, 0.0, 3.0, 1.0 / 128.0, 5000, 2);
  set_worker_count(0);
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("expected supremum identity") {
  // E sup exp(sqrt2 B(t) - 2t + 2 sqrt t) over [0, T] -> 1/Psi(sqrt 2)
  const auto f = TrendFunction::sqrt_drift(1.0, 1.0);
  const double target = 1.0 / psi(std::sqrt(2.0));
  const auto e = piterbarg_estimate(1.0, 1.0, f, 0.0, 16.0, kH, 20000, 11);
  CHECK(std::abs(e.value / target - 1.0) < 0.05);
}

TEST_CASE("infinite intervals") {
  const double schedule[] = {2.0, 4.0, 8.0, 16.0, 32.0};
  const auto lin = piterbarg_limit(1.0, 1.0, TrendFunction::linear(1.0), 0.0, 1.0 / 256.0, 20000, 3, schedule, 0.01);
  CHECK(std::isinf(lin.T));
  // P^{ct}_{1,a}[0, inf) = 1 + a/c
  CHECK(lin.value == doctest::Approx(2.0).epsilon(0.06));

  // P^h_{1,1}[-1, inf) = e^{-1} / Psi(sqrt 2)
  const double ruin_oracle = std::exp(-1.0) / psi(std::sqrt(2.0));
  EstimatorOptions opts;
  opts.grid_extrapolation = true;
  const auto ruin =
      piterbarg_limit(1.0, 1.0, TrendFunction::ruin_h(1.0, 1.0, 1.0), -1.0, kH, 20000, 5, schedule, 0.01, opts);
  CHECK(ruin.value == doctest::Approx(ruin_oracle).epsilon(0.03));

  // shift identity on [x1, inf)
  const auto f = TrendFunction::linear(1.0);
  const auto p = piterbarg_limit(1.5, 1.0, f, 0.0, 1.0 / 256.0, 20000, 9, schedule, 0.01);
  const double shifted_schedule[] = {1.5, 3.5, 7.5, 15.5, 31.5};
  const auto q = piterbarg_limit(1.5, 1.0, f.shifted(0.5), -0.5, 1.0 / 256.0, 20000, 9, shifted_schedule, 0.01);
  CHECK(std::abs(p.value - q.value) <= 3.0 * std::hypot(p.std_error, q.std_error));

  try {
    piterbarg_limit(1.0, 1.0, TrendFunction::zero(), 0.0, 1.0 / 64.0, 2000, 1, schedule, 0.01);
    FAIL("expected ScheduleExhausted");
  } catch (const ScheduleExhausted& e) {
    CHECK(e.trajectory().size() == 5);
  }
}

TEST_CASE("grid extrapolation of the constant") {
  // discrete H_1[0, 4] sits a few percent under the continuous value; the
  // nested views pull it back toward it
  EstimatorOptions plain, ext;
  ext.grid_extrapolation = true;
  const auto f = TrendFunction::linear(1.0);
  const auto a = piterbarg_estimate(1.0, 1.0, f, 0.0, 8.0, 1.0 / 256.0, 40000, 4, plain);
  const auto b = piterbarg_estimate(1.0, 1.0, f, 0.0, 8.0, 1.0 / 256.0, 40000, 4, ext);
  CHECK(b.grid_extrapolated);
  CHECK(b.value > a.value);
  CHECK(b.value == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("exponential tail fit") {
  const double hs[] = {2.0, 4.0, 8.0};
  const double vs[] = {5.0 - 2.0 * std::exp(-1.4), 5.0 - 2.0 * std::exp(-2.8), 5.0 - 2.0 * std::exp(-5.6)};
  const auto fit = fit_exponential_tail(hs, vs);
  CHECK(fit.ok);
  CHECK(fit.limit == doctest::Approx(5.0).epsilon(1e-8));
  CHECK(fit.kappa == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("default grid step") {
  CHECK(default_grid_step(0.0, 4.0) == doctest::Approx(1.0 / 512.0));
  CHECK(default_grid_step(0.0, 16.0) == doctest::Approx(16.0 / 4096.0));
}
