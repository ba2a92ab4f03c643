#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "gaussrdp/gaussian.hpp"
#include "gaussrdp/oracle.hpp"

using namespace gaussrdp;

namespace {
const GaussianSource kStdNormal(0.0, 1.0);
constexpr double kLog2 = 0.6931471805599453;
}  // namespace

TEST_CASE("ExtReal rejects invalid values and parses inf") {
  CHECK_THROWS_AS(ExtReal(-0.1), std::domain_error);
  CHECK_THROWS_AS(ExtReal(std::nan("")), std::domain_error);
  CHECK(ExtReal::infinity().is_infinite());
  CHECK(ExtReal::parse("inf").is_infinite());
  CHECK(ExtReal::parse("0.25").get() == 0.25);
  CHECK_THROWS_AS(ExtReal::parse("0.25x"), std::domain_error);
  CHECK_THROWS_AS(ExtReal::parse("-1"), std::domain_error);
  CHECK(exp_neg_two(ExtReal::infinity()) == 0.0);
  CHECK(one_minus_exp_neg_two(ExtReal::infinity()) == 1.0);
  CHECK((ExtReal(1.0) + ExtReal::infinity()).is_infinite());
}

TEST_CASE("GaussianSource validates its parameters") {
  CHECK_THROWS_AS(GaussianSource(0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(GaussianSource(0.0, -1.0), std::domain_error);
  CHECK(GaussianSource(1.0, 4.0).std_dev() == 2.0);
}

TEST_CASE("psi anchors and monotonicity") {
  CHECK(psi(1.0, kStdNormal) == 0.0);
  // Direct evaluation: log 2 - 0.375.
  CHECK(psi(0.5, kStdNormal) == doctest::Approx(kLog2 - 0.375).epsilon(1e-15));
  CHECK(psi(1e-8, kStdNormal) > 17.0);  // log term dominates as sigma -> 0
  CHECK_THROWS_AS(psi(0.0, kStdNormal), std::domain_error);
  CHECK_THROWS_AS(psi(-1.0, kStdNormal), std::domain_error);
  double prev = psi(0.01, kStdNormal);
  for (double s = 0.05; s <= 1.0; s += 0.05) {
    const double cur = psi(s, kStdNormal);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("sigma_of_p inverts psi") {
  CHECK(sigma_of_p(ExtReal(0.0), kStdNormal) == 1.0);
  CHECK(sigma_of_p(ExtReal::infinity(), kStdNormal) == 0.0);
  CHECK(sigma_of_p(ExtReal(kLog2 - 0.375), kStdNormal) ==
        doctest::Approx(0.5).epsilon(1e-10));
  // Round trip on [sigma(P_max), sigma_X].
  const GaussianSource wide(0.3, 2.56);
  for (double s = 0.08; s <= 1.6; s += 0.08) {
    const double p = psi(s, wide);
    CHECK(std::abs(sigma_of_p(ExtReal(p), wide) - s) <= 1e-10 * wide.std_dev());
  }
  // Far-tail branch still satisfies |psi(sigma(P)) - P| <= tol.
  const double far = sigma_of_p(ExtReal(50.0), kStdNormal);
  CHECK(std::abs(psi(far, kStdNormal) - 50.0) < 1e-9);
  // Monotone decreasing in P.
  double prev = 2.0;
  for (double p = 0.0; p <= 5.0; p += 0.25) {
    const double cur = sigma_of_p(ExtReal(p), kStdNormal);
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("xi anchors and monotonicity") {
  CHECK(xi(ExtReal(0.0), ExtReal(5.0)) == 0.0);
  CHECK(xi(ExtReal::infinity(), ExtReal(0.0)) == 1.0);
  // Direct evaluation of sqrt((1 - e^{-0.2})(1 - e^{-0.4})).
  const double want = std::sqrt(-std::expm1(-0.2) * -std::expm1(-0.4));
  CHECK(xi(ExtReal(0.1), ExtReal(0.1)) == doctest::Approx(want).epsilon(1e-15));
  CHECK(xi(ExtReal(0.1), ExtReal(0.1)) ==
        doctest::Approx(0.24446029734990768).epsilon(1e-14));
  for (double r = 0.0; r <= 2.0; r += 0.4) {
    for (double rc = 0.0; rc <= 2.0; rc += 0.4) {
      CHECK(xi(ExtReal(r), ExtReal(rc)) <= xi(ExtReal(r + 0.4), ExtReal(rc)) + 1e-15);
      CHECK(xi(ExtReal(r), ExtReal(rc)) <= xi(ExtReal(r), ExtReal(rc + 0.4)) + 1e-15);
      CHECK(xi(ExtReal(r), ExtReal(rc)) <= 1.0);
    }
  }
}

TEST_CASE("nu_of_p anchors") {
  CHECK(nu_of_p(0.0, kStdNormal).get() == 0.0);
  CHECK(nu_of_p(1.0, kStdNormal).get() == doctest::Approx(kLog2).epsilon(1e-15));
  CHECK(nu_of_p(2.0, kStdNormal).is_infinite());
  CHECK(nu_of_p(5.0, kStdNormal).is_infinite());
  double prev = -1.0;
  for (double p = 0.0; p < 2.0; p += 0.1) {
    const double cur = nu_of_p(p, kStdNormal).get();
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK_THROWS_AS(nu_of_p(-0.1, kStdNormal), std::domain_error);
}

TEST_CASE("gaussian divergences against hand values") {
  CHECK(gaussian_kl(kStdNormal, 0.0, 1.0) == 0.0);
  CHECK(gaussian_kl(kStdNormal, 0.0, 0.5) ==
        doctest::Approx(psi(0.5, kStdNormal)).epsilon(1e-15));
  CHECK(gaussian_kl(kStdNormal, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(gaussian_kl(kStdNormal, 0.0, 0.0), std::domain_error);

  CHECK(gaussian_w2sq(kStdNormal, 0.0, 1.0) == 0.0);
  CHECK(gaussian_w2sq(kStdNormal, 1.0, 1.0) == 1.0);
  CHECK(gaussian_w2sq(kStdNormal, 0.0, 0.5) == 0.25);
  CHECK_THROWS_AS(gaussian_w2sq(kStdNormal, 0.0, -0.5), std::domain_error);

  // Nonnegativity with equality only at the source parameters.
  for (double m = -1.0; m <= 1.0; m += 0.5) {
    for (double s = 0.4; s <= 1.6; s += 0.3) {
      const double kl = gaussian_kl(kStdNormal, m, s);
      const double w2 = gaussian_w2sq(kStdNormal, m, s);
      CHECK(kl >= 0.0);
      CHECK(w2 >= 0.0);
      if (m != 0.0 || s != 1.0) {
        CHECK(kl > 0.0);
        CHECK(w2 > 0.0);
      }
    }
  }
}

TEST_CASE("standard normal cdf against the quadrature oracle") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  // Quadrature oracle: integrate the density from far in the left tail.
  const auto pdf = [](double x) { return std_normal_pdf(x); };
  const QuadratureResult oracle = adaptive_quadrature(pdf, -12.0, 1.0, 1e-13);
  CHECK(std::abs(std_normal_cdf(1.0) - oracle.value) <=
        oracle.error + 1e-13);
  CHECK(std_normal_cdf(-1.0) ==
        doctest::Approx(1.0 - std_normal_cdf(1.0)).epsilon(1e-15));
  for (double t = -6.0; t <= 6.0; t += 0.37) {
    CHECK(std::abs(std_normal_cdf(t) + std_normal_cdf(-t) - 1.0) <= 1e-14);
  }
}

TEST_CASE("standard normal quantile round trip") {
  for (double p : {1e-9, 1e-4, 0.02, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-9}) {
    CHECK(std::abs(std_normal_cdf(std_normal_quantile(p)) - p) <= 2e-16 + 1e-12 * p);
  }
  CHECK(std_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(std_normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::domain_error);
}
