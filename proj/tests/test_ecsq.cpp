#include <cmath>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "gaussrdp/bounds.hpp"
#include "gaussrdp/ecsq.hpp"
#include "gaussrdp/verify.hpp"

using namespace gaussrdp;

namespace {
const GaussianSource kStdNormal(0.0, 1.0);
constexpr double kLog2 = 0.6931471805599453;
constexpr double kHalfCellD = (std::numbers::pi - 2.0) / std::numbers::pi;
}  // namespace

TEST_CASE("binary quantizer anchors") {
  const auto b0 = binary_quantizer(0.0, kStdNormal);
  CHECK(b0.rate == std::log(2.0));
  CHECK(b0.distortion == doctest::Approx(kHalfCellD).epsilon(1e-13));
  CHECK(b0.quantizer.boundaries.size() == 1);
  CHECK(b0.quantizer.boundaries[0] == 0.0);
  CHECK(b0.quantizer.probabilities[0] == 0.5);
  CHECK(b0.quantizer.levels[0] == doctest::Approx(-std::sqrt(2.0 / std::numbers::pi)));

  // Large threshold: one cell dominates.
  const auto b8 = binary_quantizer(8.0, kStdNormal);
  CHECK(b8.rate < 1e-13);
  CHECK(b8.distortion > 1.0 - 1e-12);

  // Extreme threshold degenerates cleanly.
  const auto b50 = binary_quantizer(50.0, kStdNormal);
  CHECK(b50.rate == 0.0);
  CHECK(b50.distortion == 1.0);
  CHECK(b50.quantizer.levels.size() == 1);

  // Frozen direct evaluation at theta = 1 (standard normal CDF 0.841345...).
  const auto b1 = binary_quantizer(1.0, kStdNormal);
  CHECK(b1.rate == doctest::Approx(0.4374332409271191).epsilon(1e-13));
  CHECK(b1.distortion == doctest::Approx(0.561371138897786).epsilon(1e-13));

  CHECK_THROWS_AS(binary_quantizer(-0.1, kStdNormal), std::domain_error);

  // Scale equivariance: distortion in units of the variance.
  const GaussianSource scaled(2.0, 4.0);
  const auto s1 = binary_quantizer(1.0, scaled);
  CHECK(s1.rate == doctest::Approx(b1.rate).epsilon(1e-15));
  CHECK(s1.distortion == doctest::Approx(4.0 * b1.distortion).epsilon(1e-14));
  CHECK(s1.quantizer.boundaries[0] == doctest::Approx(2.0 + 2.0).epsilon(1e-15));
}

TEST_CASE("binary bound at a given rate") {
  CHECK(binary_bound_at_rate(kLog2, kStdNormal) ==
        doctest::Approx(kHalfCellD).epsilon(1e-12));
  // Strictly below the Gaussian upper bound at the top rate.
  CHECK(binary_bound_at_rate(kLog2, kStdNormal) < 0.4375);

  // Bisection against a fine theta scan.
  {
    const double target = 0.3;
    double best_d = 0.0, best_gap = 1e100;
    for (int i = 0; i <= 200000; ++i) {
      const auto b = binary_quantizer(6.0 * i / 200000.0, kStdNormal);
      const double gap = std::abs(b.rate - target);
      if (gap < best_gap) {
        best_gap = gap;
        best_d = b.distortion;
      }
    }
    // The scan resolves theta to 3e-5, hence distortion to ~1e-5.
    CHECK(binary_bound_at_rate(target, kStdNormal) ==
          doctest::Approx(best_d).epsilon(1e-4));
  }

  CHECK_THROWS_AS(binary_bound_at_rate(0.0, kStdNormal), std::domain_error);
  CHECK_THROWS_AS(binary_bound_at_rate(kLog2 + 0.01, kStdNormal),
                  std::domain_error);
}

TEST_CASE("design_ecsq trivial and collapse cases") {
  // One cell: the level is the mean, the distortion is the variance.
  {
    const auto [quant, metrics] = design_ecsq(kStdNormal, 0.0, 1, 0);
    CHECK(quant.levels.size() == 1);
    CHECK(quant.levels[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(metrics.distortion == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(metrics.entropy == 0.0);
  }
  // A huge entropy price collapses any start to one cell.
  {
    const auto [quant, metrics] = design_ecsq(kStdNormal, 50.0, 12, 1);
    CHECK(quant.levels.size() == 1);
    CHECK(metrics.entropy == 0.0);
    CHECK(metrics.distortion == doctest::Approx(1.0).epsilon(1e-12));
  }
  // Plain two-cell Lloyd reproduces the symmetric binary split.
  {
    const auto [quant, metrics] = design_ecsq(kStdNormal, 0.0, 2, 0);
    CHECK(metrics.distortion == doctest::Approx(kHalfCellD).epsilon(1e-9));
    CHECK(metrics.entropy == doctest::Approx(kLog2).epsilon(1e-9));
  }
  CHECK_THROWS_AS(design_ecsq(kStdNormal, -1.0, 4, 0), std::domain_error);
  CHECK_THROWS_AS(design_ecsq(kStdNormal, 0.5, 0, 0), std::domain_error);
}

TEST_CASE("design_ecsq quantizer invariants") {
  for (double lambda : {0.02, 0.3, 1.2}) {
    std::vector<double> trace;
    const auto [quant, metrics] = design_ecsq(kStdNormal, lambda, 12, 0, &trace);
    REQUIRE(!quant.levels.empty());
    for (std::size_t i = 1; i < quant.boundaries.size(); ++i) {
      CHECK(quant.boundaries[i] > quant.boundaries[i - 1]);
    }
    double psum = 0.0;
    for (double p : quant.probabilities) {
      CHECK(p > 0.0);
      psum += p;
    }
    CHECK(psum == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t i = 1; i < trace.size(); ++i) {
      CHECK(trace[i] <= trace[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("multistart reaches the low-rate family") {
  const auto [quant, metrics] = design_ecsq_multistart(kStdNormal, 1.263, 24, 0);
  CHECK(metrics.entropy == doctest::Approx(0.05).epsilon(0.2));
  CHECK(metrics.distortion < 0.94);
  CHECK(metrics.lagrangian_cost < 1.0);  // beats the one-cell quantizer
}

TEST_CASE("trace_de_curve hull properties") {
  const std::vector<double> schedule = {0.05, 0.15, 0.3, 0.6,
                                        1.0,  1.26, 1.4};
  const auto hull = trace_de_curve(kStdNormal, schedule, 8);
  REQUIRE(hull.size() >= 3);
  CHECK(hull.front().entropy == 0.0);
  CHECK(hull.front().distortion == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < hull.size(); ++i) {
    CHECK(hull[i].entropy > hull[i - 1].entropy);
    CHECK(hull[i].distortion < hull[i - 1].distortion);
    // Every point certifies an upper bound, so the classical floor holds.
    CHECK(hull[i].distortion >=
          shannon_dr(ExtReal(hull[i].entropy), kStdNormal) - 1e-10);
  }
  // Interpolation stays within the hull's envelope.
  const double mid =
      0.5 * (hull.front().entropy + hull.back().entropy);
  const double d = hull_distortion_at(hull, mid);
  CHECK(d <= hull.front().distortion);
  CHECK(d >= hull.back().distortion);
  CHECK_THROWS_AS(hull_distortion_at(hull, hull.back().entropy + 1.0),
                  std::domain_error);
}

TEST_CASE("shannon_dr and the low-rate expansion") {
  CHECK(shannon_dr(ExtReal(0.0), kStdNormal) == 1.0);
  CHECK(shannon_dr(ExtReal::infinity(), kStdNormal) == 0.0);
  CHECK(shannon_dr(ExtReal(kLog2), kStdNormal) == doctest::Approx(0.25).epsilon(1e-15));

  CHECK(overline_de_expansion(0.0, 1.0, kStdNormal) == 1.0);
  CHECK(overline_de_expansion(0.3, 0.0, kStdNormal) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(overline_de_expansion(0.05, 1.0, kStdNormal) ==
        doctest::Approx(1.0 - 0.1 + 0.1 * std::exp(-2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(overline_de_expansion(-0.1, 0.0, kStdNormal),
                  std::domain_error);
}

TEST_CASE("ecsq property suite") {
  for (const CheckResult& r : run_ecsq_suite(0)) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.passed);
  }
}
