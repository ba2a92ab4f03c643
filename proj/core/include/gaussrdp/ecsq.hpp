#pragma once

#include <cstdint>
#include <vector>

#include "gaussrdp/extended_real.hpp"
#include "gaussrdp/gaussian.hpp"
#include "gaussrdp/oracle.hpp"

namespace gaussrdp {

// A scalar quantizer for the source: N cells split by N-1 ascending
// boundaries, one reproduction level per cell, and the cell masses under the
// source law.
struct Quantizer {
  std::vector<double> boundaries;
  std::vector<double> levels;
  std::vector<double> probabilities;
};

struct QuantizerMetrics {
  double distortion = 0.0;       // E[(X - X_hat)^2], source units squared
  double entropy = 0.0;          // H(X_hat), nats
  double lagrangian_cost = 0.0;  // distortion + lambda * entropy
};

struct BinaryQuantizerResult {
  Quantizer quantizer;
  double rate;        // output entropy, nats
  double distortion;  // source units squared
};

// The two-cell quantizer with threshold mean + theta * std and
// conditional-mean levels. Rate is the binary entropy of the cell split;
// distortion is variance * (1 - e^{-theta^2} / (2 pi Q (1-Q))) with
// Q = Phi(theta). For theta so large that the upper cell mass underflows,
// the degenerate single-cell quantizer (rate 0, distortion = variance) is
// returned. Throws std::domain_error for theta < 0.
BinaryQuantizerResult binary_quantizer(double theta,
                                       const GaussianSource& source);

// Distortion of the binary construction at a given output entropy
// rate in (0, log 2], solved by bisection on theta (the rate is strictly
// decreasing in theta). Upper-bounds the entropy-constrained distortion-rate
// function at that rate.
double binary_bound_at_rate(double rate, const GaussianSource& source);

// Entropy-penalized Lloyd design: alternates interval assignment under the
// cost (x - y_i)^2 - lambda log p_i, centroid updates, and cell-probability
// updates, with empty cells pruned. All cell integrals are closed-form
// truncated-Gaussian moments. Deterministic given (lambda, seed); seed 0
// starts from source quantiles k/(N+1), other seeds jitter the start.
// Converges when the Lagrangian cost decreases by < 1e-10 per iteration;
// throws std::runtime_error with an iteration trace if 1e4 iterations are
// exhausted. When cost_trace is non-null it receives the Lagrangian cost
// after every completed iteration.
std::pair<Quantizer, QuantizerMetrics> design_ecsq(
    const GaussianSource& source, double lambda, int n_max, std::uint64_t seed,
    std::vector<double>* cost_trace = nullptr);

// Best-of-portfolio design for one lambda: the quantile start, two jittered
// starts, and a family of deadzone starts (one central level with the rest
// fanned far outward), keeping the lowest Lagrangian cost. The deadzone
// starts matter at low rates, where alternation from quantile starts stalls
// in a symmetric split whose cost is far from optimal.
std::pair<Quantizer, QuantizerMetrics> design_ecsq_multistart(
    const GaussianSource& source, double lambda, int n_max, std::uint64_t seed);

// Sweeps the lambda schedule with the multi-start portfolio per value and
// returns the lower convex hull of the achieved (entropy, distortion) points.
// Every point certifies an upper bound on the entropy-constrained
// distortion-rate function at its entropy.
std::vector<RateDistortionPoint> trace_de_curve(
    const GaussianSource& source, const std::vector<double>& lambda_schedule,
    int n_max);

// Piecewise-linear interpolation of a traced hull at the given entropy.
// Requires hull points sorted by entropy and entropy within their span.
double hull_distortion_at(const std::vector<RateDistortionPoint>& hull,
                          double entropy);

// The classical distortion-rate function of the source: variance * e^{-2R}.
double shannon_dr(ExtReal rate, const GaussianSource& source);

// First-order low-rate expansion of the Gaussian upper bound at P = inf:
// variance * (1 - 2R + 2R e^{-2Rc}).
double overline_de_expansion(double rate, double common_randomness,
                             const GaussianSource& source);

}  // namespace gaussrdp
