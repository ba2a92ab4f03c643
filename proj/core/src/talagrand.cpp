#include "gaussrdp/talagrand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gaussrdp/oracle.hpp"
#include "gaussrdp/rng.hpp"

namespace gaussrdp {
namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // log(2 pi) / 2

double component_log_pdf(const MixtureComponent& c, double x) {
  const double z = (x - c.mean) / c.stddev;
  return -0.5 * z * z - std::log(c.stddev) - kHalfLog2Pi;
}

}  // namespace

ScalarDistribution::ScalarDistribution(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw std::domain_error("ScalarDistribution: component list is empty");
  }
  double wsum = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !(c.stddev > 0.0) || !std::isfinite(c.mean) ||
        !std::isfinite(c.weight) || !std::isfinite(c.stddev)) {
      throw std::domain_error(
          "ScalarDistribution: weights and stddevs must be positive and finite");
    }
    wsum += c.weight;
  }
  if (std::abs(wsum - 1.0) > 1e-12) {
    throw std::domain_error("ScalarDistribution: weights must sum to 1");
  }
  double second = 0.0;
  for (const auto& c : components_) {
    mean_ += c.weight * c.mean;
    second += c.weight * (c.stddev * c.stddev + c.mean * c.mean);
  }
  variance_ = second - mean_ * mean_;
}

ScalarDistribution ScalarDistribution::single(double mean, double stddev) {
  return ScalarDistribution({{1.0, mean, stddev}});
}

double ScalarDistribution::std_dev() const { return std::sqrt(variance_); }

double ScalarDistribution::pdf(double x) const {
  double p = 0.0;
  for (const auto& c : components_) {
    p += c.weight * std_normal_pdf((x - c.mean) / c.stddev) / c.stddev;
  }
  return p;
}

double ScalarDistribution::log_pdf(double x) const {
  double max_term = -std::numeric_limits<double>::infinity();
  for (const auto& c : components_) {
    max_term = std::max(max_term, std::log(c.weight) + component_log_pdf(c, x));
  }
  if (!std::isfinite(max_term)) return max_term;
  double acc = 0.0;
  for (const auto& c : components_) {
    acc += std::exp(std::log(c.weight) + component_log_pdf(c, x) - max_term);
  }
  return max_term + std::log(acc);
}

double ScalarDistribution::cdf(double x) const {
  double p = 0.0;
  for (const auto& c : components_) {
    p += c.weight * std_normal_cdf((x - c.mean) / c.stddev);
  }
  return p;
}

double ScalarDistribution::quantile(double u) const {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error("ScalarDistribution::quantile: u must be in (0, 1)");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : components_) {
    lo = std::min(lo, c.mean - 42.0 * c.stddev);
    hi = std::max(hi, c.mean + 42.0 * c.stddev);
  }
  while (cdf(lo) > u) lo -= (hi - lo);
  while (cdf(hi) < u) hi += (hi - lo);
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f = cdf(mid);
    if (std::abs(f - u) <= 1e-13 && i >= 20) return mid;
    if (f < u) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15 * (1.0 + std::abs(lo) + std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

DivergenceEstimate kl_to_gaussian(const ScalarDistribution& d,
                                  const GaussianSource& source) {
  const double s_star = std::max(source.std_dev(), d.std_dev());
  double lo = source.mean;
  double hi = source.mean;
  for (const auto& c : d.components()) {
    lo = std::min(lo, c.mean);
    hi = std::max(hi, c.mean);
  }
  lo -= 12.0 * s_star;
  hi += 12.0 * s_star;
  const double log_sx = std::log(source.std_dev());
  const auto integrand = [&](double x) {
    const double lp = d.log_pdf(x);
    if (lp < -700.0) return 0.0;  // p log(p/q) -> 0 with p
    const double z = (x - source.mean) / source.std_dev();
    const double lq = -0.5 * z * z - log_sx - kHalfLog2Pi;
    return std::exp(lp) * (lp - lq);
  };
  const QuadratureResult quad = adaptive_quadrature(integrand, lo, hi, 5e-10);
  // Outside [lo, hi] the mixture mass is below K * Phi(-12) ~ 1e-32 and the
  // log ratio grows only quadratically; 1e-12 over-covers the truncation.
  return {quad.value, quad.error + 1e-12};
}

DivergenceEstimate w2sq_1d(const ScalarDistribution& d,
                           const GaussianSource& source) {
  constexpr double kClip = 1e-9;
  const double sx = source.std_dev();
  // The quantile integral over u in [kClip, 1-kClip] is evaluated after the
  // exact substitution u = Phi(t): the source quantile becomes mean + sx * t
  // and the integrand picks up the Gaussian weight, which removes the
  // endpoint derivative blow-up of the raw u-parameterization.
  const auto integrand = [&](double t) {
    const double diff = source.mean + sx * t - d.quantile(std_normal_cdf(t));
    return diff * diff * std_normal_pdf(t);
  };
  const double t_hi = std_normal_quantile(1.0 - kClip);
  const double t_lo = -t_hi;
  // Composite 4-node Gauss-Legendre, 2048 nodes total; a coarser pass at a
  // quarter of the panel count supplies the quadrature error estimate.
  static constexpr double kNode = 0.8611363115940526;   // outer abscissa
  static constexpr double kNodeIn = 0.3399810435848563; // inner abscissa
  static constexpr double kWeight = 0.3478548451374538;
  static constexpr double kWeightIn = 0.6521451548625461;
  const auto composite = [&](int panels) {
    const double h = (t_hi - t_lo) / panels;
    double acc = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double mid = t_lo + (i + 0.5) * h;
      const double half = 0.5 * h;
      acc += kWeight * integrand(mid - half * kNode);
      acc += kWeightIn * integrand(mid - half * kNodeIn);
      acc += kWeightIn * integrand(mid + half * kNodeIn);
      acc += kWeight * integrand(mid + half * kNode);
    }
    return acc * 0.5 * h;
  };
  const double fine = composite(512);
  const double coarse = composite(128);
  // The clipped tails carry up to ~2e-8 of mass when the stds differ; a
  // quadratic extrapolation of the squared quantile difference (exact for
  // Gaussian-vs-Gaussian) recovers them, and doubles as its own uncertainty.
  const auto tail_beyond = [&](double t_edge) {
    const double g_edge = integrand(t_edge) / std_normal_pdf(t_edge);
    const double a = std::abs(t_edge);
    const double mass = 0.5 * std::erfc(a / std::numbers::sqrt2);
    return g_edge / (t_edge * t_edge) * (mass + a * std_normal_pdf(a));
  };
  const double tails = tail_beyond(t_lo) + tail_beyond(t_hi);
  return {fine + tails, std::abs(fine - coarse) + tails};
}

TalagrandReport check_refined_talagrand(const ScalarDistribution& d,
                                        const GaussianSource& source) {
  if (std::abs(d.mean() - source.mean) > 1e-9) {
    throw std::domain_error(
        "check_refined_talagrand: mixture mean must equal the source mean");
  }
  if (d.std_dev() > source.std_dev() + 1e-9) {
    throw std::domain_error(
        "check_refined_talagrand: mixture std must not exceed the source std");
  }
  TalagrandReport r;
  r.w2sq = w2sq_1d(d, source);
  r.kl = kl_to_gaussian(d, source);
  const double two_var = 2.0 * source.variance;
  r.rhs_refined = two_var * (-std::expm1(-r.kl.value));
  r.rhs_original = two_var * r.kl.value;
  const double rhs_err = two_var * std::exp(-r.kl.value) * r.kl.abs_error_bound;
  r.holds_refined =
      r.w2sq.value <= r.rhs_refined + r.w2sq.abs_error_bound + rhs_err;
  r.holds_original = r.w2sq.value <=
                     r.rhs_original + r.w2sq.abs_error_bound +
                         two_var * r.kl.abs_error_bound;
  r.slack = r.rhs_refined - r.w2sq.value;
  return r;
}

GaussianizationGapReport check_gaussianization_gap(const ScalarDistribution& d,
                                                   const GaussianSource& source) {
  const double m = d.mean();
  const double s = d.std_dev();
  const DivergenceEstimate w2 = w2sq_1d(d, source);
  const DivergenceEstimate kl = kl_to_gaussian(d, source);
  GaussianizationGapReport r;
  r.w2_gap = w2.value - gaussian_w2sq(source, m, s);
  r.kl_gap = kl.value - gaussian_kl(source, m, s);
  const double scale = 2.0 * source.std_dev() * s;
  r.rhs = scale * (-std::expm1(-r.kl_gap));
  r.error_bound = w2.abs_error_bound +
                  scale * std::exp(-r.kl_gap) * kl.abs_error_bound;
  r.holds = r.w2_gap <= r.rhs + r.error_bound;
  return r;
}

ScalarDistribution random_mixture(std::uint64_t seed,
                                  const GaussianSource& source) {
  RandomStream rs(seed);
  const double sx = source.std_dev();
  const int k = rs.next_int(1, 5);
  std::vector<MixtureComponent> comps(k);
  double wsum = 0.0;
  for (auto& c : comps) {
    // Dirichlet(1,...,1) via normalized exponentials.
    double u;
    do {
      u = rs.next_unit();
    } while (u == 0.0);
    c.weight = -std::log1p(-u);
    wsum += c.weight;
  }
  for (auto& c : comps) {
    c.weight /= wsum;
    c.mean = source.mean + rs.next_uniform(-2.0 * sx, 2.0 * sx);
    c.stddev = rs.next_uniform(0.1 * sx, sx);
  }
  // Re-center to the source mean.
  double mean = 0.0;
  for (const auto& c : comps) mean += c.weight * c.mean;
  for (auto& c : comps) c.mean += source.mean - mean;
  // Contract about the source mean if the mixture std exceeds the source's.
  double second = 0.0;
  for (const auto& c : comps) {
    const double dm = c.mean - source.mean;
    second += c.weight * (c.stddev * c.stddev + dm * dm);
  }
  if (second > source.variance) {
    const double contraction = sx / std::sqrt(second);
    for (auto& c : comps) {
      c.mean = source.mean + contraction * (c.mean - source.mean);
      c.stddev *= contraction;
    }
  }
  // Renormalize the weights exactly; rounding in the divisions above may
  // leave the sum a few ulps off 1.
  wsum = 0.0;
  for (const auto& c : comps) wsum += c.weight;
  for (auto& c : comps) c.weight /= wsum;
  return ScalarDistribution(std::move(comps));
}

}  // namespace gaussrdp
