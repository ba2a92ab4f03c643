#include "gaussrdp/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaussrdp {

ExtReal ExtReal::parse(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") {
    return ExtReal::infinity();
  }
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::domain_error("ExtReal: cannot parse '" + text + "'");
  }
  if (pos != text.size()) {
    throw std::domain_error("ExtReal: trailing characters in '" + text + "'");
  }
  return ExtReal(v);
}

GaussianSource::GaussianSource(double mean_in, double variance_in)
    : mean(mean_in), variance(variance_in) {
  if (!std::isfinite(mean) || !std::isfinite(variance) || variance <= 0.0) {
    throw std::domain_error(
        "GaussianSource: mean must be finite and variance positive");
  }
}

double GaussianSource::std_dev() const { return std::sqrt(variance); }

double std_normal_cdf(double theta) {
  return 0.5 * std::erfc(-theta / std::numbers::sqrt2);
}

double std_normal_pdf(double x) {
  constexpr double kInvSqrt2Pi = 0.3989422804014327;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

namespace {

// Rational initial guess for the probit function (Acklam's coefficients),
// good to ~1e-9 over (0, 1).
double probit_estimate(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double std_normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("std_normal_quantile: p must lie in (0, 1)");
  }
  double x = probit_estimate(p);
  // One Halley step against the erfc-based CDF brings the estimate to
  // full double precision.
  const double e = std_normal_cdf(x) - p;
  const double u = e / std_normal_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double psi(double sigma_hat, const GaussianSource& source) {
  if (!(sigma_hat > 0.0)) {
    throw std::domain_error("psi: sigma_hat must be positive");
  }
  const double sx = source.std_dev();
  return std::log(sx / sigma_hat) +
         (sigma_hat * sigma_hat - source.variance) / (2.0 * source.variance);
}

double sigma_of_p(ExtReal perception, const GaussianSource& source) {
  const double sx = source.std_dev();
  if (perception.get() == 0.0) return sx;
  if (perception.is_infinite()) return 0.0;
  const double p = perception.get();
  if (p >= 30.0) {
    // The log term dominates here; inverting it leaves a residual of
    // e^{-2p-1}/2 < 1e-27 in psi, far below the bisection tolerance. The
    // fixed bracket below cannot contain the root once p > psi(1e-15 sx).
    return sx * std::exp(-(p + 0.5));
  }
  double lo = 1e-15 * sx;
  double hi = sx;
  // psi is strictly decreasing on (0, sx]: psi(lo) > p > psi(hi) = 0.
  for (int i = 0; i < 200 && (hi - lo) > 1e-12 * sx; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (psi(mid, source) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double xi(ExtReal rate, ExtReal common_randomness) {
  return std::sqrt(one_minus_exp_neg_two(rate) *
                   one_minus_exp_neg_two(rate + common_randomness));
}

ExtReal nu_of_p(double perception, const GaussianSource& source) {
  if (!(perception >= 0.0)) {
    throw std::domain_error("nu_of_p: perception must be >= 0");
  }
  const double two_var = 2.0 * source.variance;
  if (perception >= two_var) return ExtReal::infinity();
  return ExtReal(-std::log1p(-perception / two_var));
}

double gaussian_kl(const GaussianSource& source, double mean2, double std2) {
  if (!(std2 > 0.0)) {
    throw std::domain_error("gaussian_kl: std2 must be positive");
  }
  const double sx = source.std_dev();
  const double dm = source.mean - mean2;
  return std::log(sx / std2) +
         (dm * dm + std2 * std2 - source.variance) / (2.0 * source.variance);
}

double gaussian_w2sq(const GaussianSource& source, double mean2, double std2) {
  if (!(std2 >= 0.0)) {
    throw std::domain_error("gaussian_w2sq: std2 must be >= 0");
  }
  const double dm = source.mean - mean2;
  const double ds = source.std_dev() - std2;
  return dm * dm + ds * ds;
}

}  // namespace gaussrdp
