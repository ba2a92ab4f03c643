#pragma once

#include "gaussrdp/extended_real.hpp"

namespace gaussrdp {

// Source law N(mean, variance). All bounds are expressed relative to it.
struct GaussianSource {
  double mean;
  double variance;

  GaussianSource(double mean, double variance);

  double std_dev() const;
};

// (x)_+ = max(x, 0). Applied before squaring wherever a clamped term is
// squared, so rounding can never produce a negative radicand.
inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

// Standard normal CDF, PDF and inverse CDF. The CDF goes through erfc and is
// accurate to ~1e-16 relative; the inverse combines a rational initial guess
// with one Halley step.
double std_normal_cdf(double theta);
double std_normal_pdf(double x);
double std_normal_quantile(double p);

// psi(sigma_hat) = log(sigma_X/sigma_hat) + (sigma_hat^2 - sigma_X^2)/(2 sigma_X^2).
// Strictly decreasing on (0, sigma_X], zero at sigma_hat = sigma_X.
// Throws std::domain_error for sigma_hat <= 0.
double psi(double sigma_hat, const GaussianSource& source);

// The unique sigma in [0, sigma_X] with psi(sigma) = perception.
// sigma_of_p(0) = sigma_X, sigma_of_p(inf) = 0, monotone decreasing.
double sigma_of_p(ExtReal perception, const GaussianSource& source);

// xi(R, Rc) = sqrt((1 - e^{-2R})(1 - e^{-2(R+Rc)})), in [0, 1].
double xi(ExtReal rate, ExtReal common_randomness);

// nu(P) = log(2 sigma_X^2 / (2 sigma_X^2 - P)_+); +inf once P >= 2 sigma_X^2.
ExtReal nu_of_p(double perception, const GaussianSource& source);

// KL divergence of N(mean2, std2^2) from the source, in nats.
// Throws std::domain_error for std2 <= 0.
double gaussian_kl(const GaussianSource& source, double mean2, double std2);

// Squared Wasserstein-2 distance between N(mean2, std2^2) and the source:
// (mean difference)^2 + (std difference)^2.
double gaussian_w2sq(const GaussianSource& source, double mean2, double std2);

}  // namespace gaussrdp
