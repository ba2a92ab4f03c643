#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "gaussrdp/bounds.hpp"
#include "gaussrdp/oracle.hpp"

using namespace gaussrdp;

namespace {
const GaussianSource kStdNormal(0.0, 1.0);
constexpr double kLog2 = 0.6931471805599453;
constexpr double kHalfCellD = (std::numbers::pi - 2.0) / std::numbers::pi;
}  // namespace

TEST_CASE("GridSpec validation") {
  CHECK_THROWS_AS(GridSpec(1.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec(0.0, 1.0, 2), std::invalid_argument);
}

TEST_CASE("grid_min_sigma finds known minima") {
  const auto parabola = [](double s) { return (s - 0.4) * (s - 0.4); };
  const ScalarOptimum m = grid_min_sigma(parabola, GridSpec(0.0, 1.0, 101), 80);
  CHECK(m.argument == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(m.value == doctest::Approx(0.0).epsilon(1e-15));

  // Constant objective: first grid point wins.
  const ScalarOptimum flat =
      grid_min_sigma([](double) { return 3.0; }, GridSpec(0.25, 1.0, 11), 40);
  CHECK(flat.argument == 0.25);
  CHECK(flat.value == 3.0);

  // Refinement never worsens the raw grid optimum.
  const auto bumpy = [](double s) { return std::sin(17.0 * s) + 0.3 * s; };
  const GridSpec spec(0.0, 2.0, 41);
  double raw = std::numeric_limits<double>::infinity();
  for (int i = 0; i < spec.points; ++i) {
    raw = std::min(raw, bumpy(spec.lo + i * (spec.hi - spec.lo) / (spec.points - 1)));
  }
  CHECK(grid_min_sigma(bumpy, spec, 80).value <= raw);
}

TEST_CASE("grid_sup_alpha behavior") {
  // Past the strictness threshold the supremum is zero on the whole grid.
  {
    const GaussianSource src(0.0, 1.0);
    const double p_star = strictness_threshold_p(0.2, 0.3, src).threshold.get();
    const RdpQuery q{src, 0.2, 0.3, p_star + 0.05, PerceptionMeasure::kW2Sq};
    const double sigma_hat = *lower_w2(q).minimizer_sigma;
    CHECK(grid_sup_alpha(sigma_hat, q).value == 0.0);
  }
  // Degenerate left endpoint: the argmax sits at sigma_X / sigma_hat.
  {
    const RdpQuery q{kStdNormal, 0.4, 0.3, 0.09, PerceptionMeasure::kW2Sq};
    const double sigma_hat = 0.7;
    const ScalarOptimum s = grid_sup_alpha(sigma_hat, q);
    CHECK(std::abs(s.argument - 1.0 / sigma_hat) <= 1e-4);
  }
  CHECK_THROWS_AS(grid_sup_alpha(0.7,
                                 RdpQuery{kStdNormal, 0.4, 0.3, 0.09,
                                          PerceptionMeasure::kW2Sq},
                                 GridSpec(0.0, 10.0, 11)),
                  std::invalid_argument);
}

TEST_CASE("brute quantizer scan") {
  const auto front2 = brute_quantizer_search(kStdNormal, 2, GridSpec(-4.0, 4.0, 2001));
  REQUIRE(!front2.empty());
  // The best two-cell point sits at the symmetric split.
  double best_d = 1e100;
  for (const auto& pt : front2) best_d = std::min(best_d, pt.distortion);
  CHECK(best_d == doctest::Approx((std::numbers::pi - 2.0) / std::numbers::pi)
                      .epsilon(1e-5));
  // Entropies shrink toward zero with distortion approaching the variance.
  CHECK(front2.front().distortion == doctest::Approx(1.0).epsilon(1e-3));

  // The three-cell front dominates the two-cell front on a shared grid, up
  // to the resolution of the scan, and strictly so away from the ends.
  const GridSpec shared(-4.0, 4.0, 301);
  const auto front2c = brute_quantizer_search(kStdNormal, 2, shared);
  const auto front3 = brute_quantizer_search(kStdNormal, 3, shared);
  const auto staircase_at = [&](double h) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pt : front3) {
      if (pt.entropy <= h) best = std::min(best, pt.distortion);
    }
    return best;
  };
  for (const auto& p2 : front2c) {
    if (p2.entropy >= front3.front().entropy) {
      CHECK(staircase_at(p2.entropy) <= p2.distortion + 5e-4);
    }
  }
  // At the full split the third cell buys a strict improvement.
  CHECK(staircase_at(kLog2) < kHalfCellD - 1e-3);
  CHECK_THROWS_AS(brute_quantizer_search(kStdNormal, 4, GridSpec(-4.0, 4.0, 11)),
                  std::invalid_argument);
  CHECK_THROWS_AS(brute_quantizer_search(kStdNormal, 3, GridSpec(-4.0, 4.0, 9001)),
                  std::invalid_argument);
}

TEST_CASE("adaptive quadrature") {
  const auto sq = [](double x) { return x * x; };
  const QuadratureResult a = adaptive_quadrature(sq, 0.0, 1.0, 1e-12);
  CHECK(a.value == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  const auto pdf = [](double x) { return std_normal_pdf(x); };
  const QuadratureResult b = adaptive_quadrature(pdf, -12.0, 12.0, 1e-13);
  CHECK(std::abs(b.value - 1.0) <= 1e-12);

  const QuadratureResult c =
      adaptive_quadrature([](double x) { return std::sin(x); }, 0.0,
                          std::numbers::pi, 1e-12);
  CHECK(c.value == doctest::Approx(2.0).epsilon(1e-13));

  CHECK_THROWS_AS(adaptive_quadrature(sq, 0.0, 1.0, 0.0), std::invalid_argument);

  // Determinism: identical inputs give bit-identical outputs.
  const QuadratureResult d1 = adaptive_quadrature(pdf, -3.0, 5.0, 1e-11);
  const QuadratureResult d2 = adaptive_quadrature(pdf, -3.0, 5.0, 1e-11);
  CHECK(d1.value == d2.value);
  CHECK(d1.error == d2.error);
}
