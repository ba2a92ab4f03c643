#pragma once

#include <optional>

#include "gaussrdp/query.hpp"

namespace gaussrdp {

// A distortion bound value (source units squared) together with the
// optimizing reconstruction std and, for the min-sup lower bound, the
// optimizing alpha.
struct BoundResult {
  double value = 0.0;
  std::optional<double> minimizer_sigma;
  std::optional<double> maximizer_alpha;
};

enum class ThresholdRegime {
  kClosedForm,              // single-branch closed form
  kPerceptionAboveVariance, // P >= sigma_X^2, threshold is 0
  kCommonRandomnessLogTwo,  // degenerate linear branch at Rc = log 2
  kQuadraticRoot,           // general quadratic-root branch
};

struct ThresholdResult {
  ExtReal threshold;
  ThresholdRegime regime;
};

// Lower bound on the distortion-rate-perception function, KL measure:
// min over sigma_hat in [sigma(P), sigma_X] of
//   sigma_X^2 + sigma_hat^2
//   - 2 sigma_X sigma_hat sqrt((1 - e^{-2R})(1 - e^{-2(R+Rc+P-psi(sigma_hat))})).
// Requires q.measure == kKL.
BoundResult lower_kl(const RdpQuery& q);

// Upper bound, KL measure:
//   sigma_X^2 - sigma_X^2 xi^2 + (sigma(P) - sigma_X xi)_+^2.
BoundResult upper_kl(const RdpQuery& q);

// Lower bound, squared-W2 measure:
// min over sigma_hat in [(sigma_X - sqrt(P))_+, sigma_X] of
//   sigma_X^2 + sigma_hat^2
//   - 2 sigma_X sqrt((1 - e^{-2R})(sigma_hat^2 - (sigma_X e^{-(R+Rc)} - sqrt(P))_+^2)).
// The minimizer is evaluated in closed form (four-case dispatch on
// sqrt(P)/sigma_X). Requires q.measure == kW2Sq.
BoundResult lower_w2(const RdpQuery& q);

// Upper bound, squared-W2 measure:
//   sigma_X^2 - sigma_X^2 xi^2 + (sigma_X - sqrt(P) - sigma_X xi)_+^2.
BoundResult upper_w2(const RdpQuery& q);

// delta_+(sigma_hat, alpha) =
//   (sigma_X e^{-(R+Rc)} - sqrt(sigma_X^2 - alpha (sigma_X^2 + sigma_hat^2 - P)
//                               + alpha^2 sigma_hat^2))_+ / alpha.
// A tiny negative radicand from rounding is clamped to zero. At alpha = 1 this
// reduces to the inner term of the plain W2 lower bound.
// Throws std::domain_error for alpha <= 0.
double delta_plus(double sigma_hat, double alpha, const RdpQuery& q);

// Whether the supremum of alpha -> delta_+(sigma_hat, alpha) is positive,
// i.e. whether alpha_hat is defined at this sigma_hat.
bool delta_sup_positive(double sigma_hat, const RdpQuery& q);

// The closed-form maximizer of alpha -> delta_+(sigma_hat, alpha).
// Only defined where the supremum is positive, i.e.
//   P < sigma_X^2 + sigma_hat^2 - 2 sigma_X sigma_hat sqrt(1 - e^{-2(R+Rc)});
// outside that region throws std::logic_error. The rationalized root formula
// used here also covers the two degenerate cases exactly: it yields
// sigma_X/sigma_hat at sigma_hat = sigma_X - sqrt(P) and
// sigma_X^2/(sigma_X^2 + sigma_hat^2 - P) when the quadratic degenerates to
// linear.
double alpha_hat(double sigma_hat, const RdpQuery& q);

// Improved lower bound, squared-W2 measure: the min over sigma_hat of the sup
// over alpha > 0 with delta_+ replacing the fixed inner term. Coincides with
// lower_w2 exactly outside the strictness region (R or Rc zero/infinite, P = 0,
// or P >= strictness_threshold_p). Requires q.measure == kW2Sq.
BoundResult improved_lower_w2(const RdpQuery& q);

// The perception level below which the improved lower bound is strictly
// larger than the plain one:
//   P* = sigma_X^2 (2 - e^{-2R} - 2 xi(R, Rc)).
ThresholdResult strictness_threshold_p(double rate, double common_randomness,
                                       const GaussianSource& source);

// The rate threshold R* with the same role, solved from P* as a function of R:
//   R* = 0 when P >= sigma_X^2, otherwise -log(z_hat)/2 where z_hat is the
//   relevant root of zeta_1 z^2 - zeta_2 z + zeta_3 = 0 with
//   zeta_1 = 4 e^{-2Rc} - 1, zeta_2 = 4 e^{-2Rc} + 2P/sigma_X^2,
//   zeta_3 = (4 sigma_X^2 - P) P / sigma_X^4.
// Requires common_randomness in (0, inf) and perception in (0, inf];
// violations throw std::domain_error.
ThresholdResult strictness_threshold_r(double common_randomness,
                                       ExtReal perception,
                                       const GaussianSource& source);

// Lower bound on the KL-constrained function induced by the W2 lower bound
// through the refined transportation inequality: lower_w2 evaluated at
// perception 2 sigma_X^2 (1 - e^{-P}). Requires q.measure == kKL.
BoundResult induced_lower_kl(const RdpQuery& q);

// Upper bound on the W2-constrained function induced by the KL upper bound:
// upper_kl evaluated at perception nu(P). Requires q.measure == kW2Sq.
BoundResult induced_upper_w2(const RdpQuery& q);

}  // namespace gaussrdp
