#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "gaussrdp/bounds.hpp"
#include "gaussrdp/oracle.hpp"
#include "gaussrdp/verify.hpp"

using namespace gaussrdp;

namespace {

const GaussianSource kStdNormal(0.0, 1.0);
constexpr double kLog2 = 0.6931471805599453;

RdpQuery kl_query(double r, double rc, ExtReal p) {
  return {kStdNormal, r, rc, p, PerceptionMeasure::kKL};
}
RdpQuery w2_query(double r, double rc, ExtReal p) {
  return {kStdNormal, r, rc, p, PerceptionMeasure::kW2Sq};
}

// Test-local restatements of the bound objectives, independent of the
// library's evaluation path, used as grid-search oracles.
double psi_restated(double s) { return std::log(1.0 / s) + 0.5 * (s * s - 1.0); }

double kl_objective_restated(double s, double r, double rc, double p) {
  const double arg = r + rc + p - psi_restated(s);
  return 1.0 + s * s -
         2.0 * s * std::sqrt(-std::expm1(-2.0 * r) * -std::expm1(-2.0 * arg));
}

double w2_objective_restated(double s, double r, double rc, double p) {
  const double inner = std::max(std::exp(-(r + rc)) - std::sqrt(p), 0.0);
  const double rad = std::max(s * s - inner * inner, 0.0);
  return 1.0 + s * s - 2.0 * std::sqrt(-std::expm1(-2.0 * r) * rad);
}

double delta_restated(double sigma_hat, double alpha, double r, double rc,
                      double p) {
  const double rad = std::max(
      1.0 - alpha * (1.0 + sigma_hat * sigma_hat - p) +
          alpha * alpha * sigma_hat * sigma_hat,
      0.0);
  return std::max(std::exp(-(r + rc)) - std::sqrt(rad), 0.0) / alpha;
}

double sigma_of_p_restated(double p) {
  double lo = 1e-12, hi = 1.0;
  for (int i = 0; i < 120; ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi_restated(mid) > p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("lower_kl anchors") {
  CHECK(lower_kl(kl_query(0.0, 0.0, ExtReal::infinity())).value ==
        doctest::Approx(1.0).epsilon(1e-15));
  // Infinite rate drives the bound to zero.
  CHECK(lower_kl({kStdNormal, ExtReal::infinity(), 0.3, 0.2,
                  PerceptionMeasure::kKL})
            .value == doctest::Approx(0.0).epsilon(1e-12));
  // Perception-free value is the classical one.
  CHECK(lower_kl(kl_query(0.5, 0.0, ExtReal::infinity())).value ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK_THROWS_AS(lower_kl(w2_query(0.5, 0.0, 0.1)), std::invalid_argument);
}

TEST_CASE("lower_kl matches the grid-search oracle") {
  const double r = 1.0, rc = 0.0, p = 0.1;
  const BoundResult got = lower_kl(kl_query(r, rc, p));
  const double lo = sigma_of_p_restated(p);
  const ScalarOptimum oracle = grid_min_sigma(
      [&](double s) { return kl_objective_restated(s, r, rc, p); },
      GridSpec(lo, 1.0, 40001), 90);
  CHECK(std::abs(got.value - oracle.value) <= 1e-6);
  CHECK(std::abs(*got.minimizer_sigma - oracle.argument) <= 1e-6);
}

TEST_CASE("upper_kl anchors") {
  // At R = 0 the bound is variance + sigma(P)^2.
  const double sp = sigma_of_p_restated(0.2);
  CHECK(upper_kl(kl_query(0.0, 0.5, 0.2)).value ==
        doctest::Approx(1.0 + sp * sp).epsilon(1e-9));
  CHECK(upper_kl(kl_query(kLog2, 0.0, ExtReal::infinity())).value == 0.4375);
  // Independent re-evaluation at an interior point.
  {
    const double r = 0.5, rc = 0.1, p = 0.1;
    const double x =
        std::sqrt(-std::expm1(-2.0 * r) * -std::expm1(-2.0 * (r + rc)));
    const double s = sigma_of_p_restated(p);
    const double clamp = std::max(s - x, 0.0);
    const double want = 1.0 - x * x + clamp * clamp;
    CHECK(upper_kl(kl_query(r, rc, p)).value ==
          doctest::Approx(want).epsilon(1e-9));
  }
  CHECK_THROWS_AS(upper_kl(w2_query(0.5, 0.0, 0.1)), std::invalid_argument);
}

TEST_CASE("lower_w2 closed form at Rc = 0") {
  for (double r : {0.1, 0.5, 1.0}) {
    for (double p : {0.01, 0.1, 0.5, 1.5}) {
      const double want =
          std::exp(-2.0 * r) +
          std::pow(std::max(std::exp(-r) - std::sqrt(p), 0.0), 2);
      CHECK(lower_w2(w2_query(r, 0.0, p)).value ==
            doctest::Approx(want).epsilon(1e-12));
    }
  }
  CHECK(lower_w2({kStdNormal, ExtReal::infinity(), 0.0, 0.3,
                  PerceptionMeasure::kW2Sq})
            .value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(lower_w2(kl_query(0.5, 0.0, 0.1)), std::invalid_argument);
}

TEST_CASE("lower_w2 matches the grid-search oracle") {
  const double r = 0.5, rc = 0.2, p = 0.05;
  const BoundResult got = lower_w2(w2_query(r, rc, p));
  const double lo = std::max(1.0 - std::sqrt(p), 0.0);
  const ScalarOptimum oracle = grid_min_sigma(
      [&](double s) { return w2_objective_restated(s, r, rc, p); },
      GridSpec(lo, 1.0, 40001), 90);
  CHECK(std::abs(got.value - oracle.value) <= 1e-6);
  CHECK(std::abs(*got.minimizer_sigma - oracle.argument) <= 1e-4);
}

TEST_CASE("upper_w2 anchors") {
  for (double r : {0.2, 0.8}) {
    for (double rc : {0.0, 0.4}) {
      const double x = xi(ExtReal(r), ExtReal(rc));
      // P = 0: algebraic simplification to 2 var (1 - xi).
      CHECK(upper_w2(w2_query(r, rc, 0.0)).value ==
            doctest::Approx(2.0 * (1.0 - x)).epsilon(1e-14));
      // Large P: the clamp term vanishes.
      const double p_big = (1.0 - x) * (1.0 - x) + 0.01;
      CHECK(upper_w2(w2_query(r, rc, p_big)).value ==
            doctest::Approx(1.0 - x * x).epsilon(1e-14));
    }
  }
  CHECK(upper_w2(w2_query(kLog2, 0.0, ExtReal::infinity())).value == 0.4375);
  CHECK_THROWS_AS(upper_w2(kl_query(0.5, 0.0, 0.1)), std::invalid_argument);
}

TEST_CASE("delta_plus against an independent restatement") {
  const RdpQuery q = w2_query(0.3, 0.2, 0.1);
  for (double sigma_hat : {0.5, 0.8, 0.95}) {
    for (double alpha : {0.004, 0.02, 0.3, 1.0, 1.3, 8.0, 200.0}) {
      CHECK(delta_plus(sigma_hat, alpha, q) ==
            doctest::Approx(delta_restated(sigma_hat, alpha, 0.3, 0.2, 0.1))
                .epsilon(1e-12));
    }
  }
  // At alpha = 1 the inner term of the plain bound is recovered.
  for (double p : {0.2, 0.5, 1.1}) {
    const RdpQuery qp = w2_query(0.3, 0.2, p);
    const double want = std::max(std::exp(-0.5) - std::sqrt(p), 0.0);
    CHECK(delta_plus(0.7, 1.0, qp) == doctest::Approx(want).epsilon(1e-13));
  }
  // Large perception at alpha = 1 gives zero.
  CHECK(delta_plus(0.7, 1.0, w2_query(0.3, 0.2, 0.9)) == 0.0);
  // Infinite total rate gives zero.
  CHECK(delta_plus(0.7, 2.0,
                   {kStdNormal, ExtReal::infinity(), ExtReal::infinity(), 0.1,
                    PerceptionMeasure::kW2Sq}) == 0.0);
  CHECK_THROWS_AS(delta_plus(0.7, 0.0, q), std::domain_error);
  CHECK_THROWS_AS(delta_plus(0.7, -1.0, q), std::domain_error);
}

TEST_CASE("alpha_hat closed form") {
  // Degenerate case sigma_hat = sigma_X - sqrt(P).
  {
    const RdpQuery q = w2_query(0.4, 0.3, 0.09);
    const double sigma_hat = 1.0 - 0.3;
    CHECK(alpha_hat(sigma_hat, q) ==
          doctest::Approx(1.0 / sigma_hat).epsilon(1e-12));
  }
  // Rc = 0 at the plain minimizer gives exactly 1.
  {
    const RdpQuery q = w2_query(0.4, 0.0, 0.04);
    const double sigma_hat = *lower_w2(q).minimizer_sigma;
    CHECK(alpha_hat(sigma_hat, q) == doctest::Approx(1.0).epsilon(1e-10));
  }
  // Interior case against the log-spaced grid supremum.
  {
    const RdpQuery q = w2_query(0.1, 0.1, 0.1);
    const double a = alpha_hat(0.9, q);
    const ScalarOptimum grid = grid_sup_alpha(0.9, q);
    CHECK(std::abs(a - grid.argument) <= 1e-4);
    CHECK(std::abs(delta_plus(0.9, a, q) - grid.value) <= 1e-10);
  }
  // Outside the positive-supremum region.
  {
    const RdpQuery q = w2_query(0.1, 0.1, ExtReal(1.9));
    CHECK(!delta_sup_positive(0.99, q));
    CHECK_THROWS_AS(alpha_hat(0.99, q), std::logic_error);
  }
}

TEST_CASE("improved_lower_w2 anchors and min-sup oracle") {
  // Rc = 0 coincides with the plain bound exactly.
  for (double p : {0.05, 0.4, 1.0}) {
    const RdpQuery q = w2_query(0.3, 0.0, p);
    CHECK(improved_lower_w2(q).value == lower_w2(q).value);
  }
  // P = inf collapses to the classical value.
  CHECK(improved_lower_w2(w2_query(0.5, 0.7, ExtReal::infinity())).value ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  // Strict improvement inside the region, matching the min-sup grid oracle.
  {
    const RdpQuery q = w2_query(0.1, 0.1, 0.3);
    const BoundResult got = improved_lower_w2(q);
    CHECK(got.value > lower_w2(q).value + 1e-4);
    const double lo = std::max(1.0 - std::sqrt(0.3), 0.0);
    double best = 1e100;
    for (int i = 0; i <= 4000; ++i) {
      const double s = lo + (1.0 - lo) * i / 4000.0;
      const double d = grid_sup_alpha(s, q).value;
      const double rad = std::max(s * s - d * d, 0.0);
      const double v = 1.0 + s * s - 2.0 * std::sqrt(-std::expm1(-0.2) * rad);
      best = std::min(best, v);
    }
    CHECK(std::abs(got.value - best) <= 1e-6);
  }
}

TEST_CASE("strictness thresholds") {
  const ThresholdResult p_star = strictness_threshold_p(0.1, 0.1, kStdNormal);
  CHECK(p_star.threshold.get() == doctest::Approx(0.692).epsilon(2e-3));
  CHECK(p_star.regime == ThresholdRegime::kClosedForm);
  // Rc = 0 reduces to the perception-free lower bound value.
  for (double r : {0.2, 0.7, 1.5}) {
    CHECK(strictness_threshold_p(r, 0.0, kStdNormal).threshold.get() ==
          doctest::Approx(std::exp(-2.0 * r)).epsilon(1e-13));
  }
  CHECK(strictness_threshold_p(0.0, 2.0, kStdNormal).threshold.get() ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(strictness_threshold_p(-0.1, 0.0, kStdNormal),
                  std::domain_error);

  const ThresholdResult r_star =
      strictness_threshold_r(0.1, ExtReal(0.1), kStdNormal);
  CHECK(r_star.threshold.get() == doctest::Approx(1.052).epsilon(2e-3));
  CHECK(r_star.regime == ThresholdRegime::kQuadraticRoot);
  CHECK(strictness_threshold_r(0.4, ExtReal(1.0), kStdNormal).threshold.get() ==
        0.0);
  CHECK(strictness_threshold_r(0.4, ExtReal(1.0), kStdNormal).regime ==
        ThresholdRegime::kPerceptionAboveVariance);
  CHECK(strictness_threshold_r(0.4, ExtReal::infinity(), kStdNormal)
            .threshold.get() == 0.0);
  // Degenerate linear branch at Rc = log 2, cross-checked by bisecting the
  // P threshold in R.
  {
    const ThresholdResult res =
        strictness_threshold_r(kLog2, ExtReal(0.5), kStdNormal);
    CHECK(res.regime == ThresholdRegime::kCommonRandomnessLogTwo);
    const double z1 = 4.0 * std::exp(-2.0 * kLog2) - 1.0;
    CHECK(std::abs(z1) < 1e-15);
    const double z2 = 4.0 * std::exp(-2.0 * kLog2) + 1.0;
    const double z3 = (4.0 - 0.5) * 0.5;
    CHECK(res.threshold.get() ==
          doctest::Approx(-0.5 * std::log(z3 / z2)).epsilon(1e-12));
    double lo = 1e-9, hi = 8.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (strictness_threshold_p(mid, kLog2, kStdNormal).threshold.get() > 0.5
           ? lo
           : hi) = mid;
    }
    CHECK(res.threshold.get() == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(strictness_threshold_r(0.0, ExtReal(0.1), kStdNormal),
                  std::domain_error);
  CHECK_THROWS_AS(strictness_threshold_r(0.1, ExtReal(0.0), kStdNormal),
                  std::domain_error);
}

TEST_CASE("induced bounds") {
  // P = 0 maps to P = 0.
  CHECK(induced_lower_kl(kl_query(0.4, 0.2, 0.0)).value ==
        lower_w2(w2_query(0.4, 0.2, 0.0)).value);
  // P = inf maps to 2 var.
  CHECK(induced_lower_kl(kl_query(0.4, 0.2, ExtReal::infinity())).value ==
        lower_w2(w2_query(0.4, 0.2, 2.0)).value);
  CHECK(induced_lower_kl(kl_query(0.5, 0.0, 0.1)).value <=
        lower_kl(kl_query(0.5, 0.0, 0.1)).value + 1e-12);

  CHECK(induced_upper_w2(w2_query(0.4, 0.2, 0.0)).value ==
        upper_kl(kl_query(0.4, 0.2, 0.0)).value);
  CHECK(induced_upper_w2(w2_query(0.4, 0.2, 2.0)).value ==
        upper_kl(kl_query(0.4, 0.2, ExtReal::infinity())).value);
  CHECK(induced_upper_w2(w2_query(0.3, 0.0, 0.1)).value >=
        upper_w2(w2_query(0.3, 0.0, 0.1)).value - 1e-12);
  CHECK_THROWS_AS(induced_lower_kl(w2_query(0.4, 0.2, 0.1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(induced_upper_w2(kl_query(0.4, 0.2, 0.1)),
                  std::invalid_argument);
}

TEST_CASE("bounds property suite") {
  for (const CheckResult& r : run_bounds_suite(0)) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.passed);
  }
}
