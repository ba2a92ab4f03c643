#pragma once

#include <functional>
#include <vector>

#include "gaussrdp/query.hpp"

namespace gaussrdp {

// A scan interval for the brute-force verifiers.
struct GridSpec {
  double lo;
  double hi;
  int points;

  GridSpec(double lo, double hi, int points);
};

struct ScalarOptimum {
  double argument;
  double value;
};

struct QuadratureResult {
  double value;
  double error;
};

// An achieved (output entropy, distortion) pair, both with respect to the
// Gaussian source. Entropy in nats, distortion in source units squared.
struct RateDistortionPoint {
  double entropy;
  double distortion;
};

// Uniform grid scan plus golden-section refinement around the best grid
// point. Ties break toward the first index; the refined optimum is never
// worse than the raw grid optimum. Deterministic.
ScalarOptimum grid_min_sigma(const std::function<double(double)>& objective,
                             const GridSpec& interval, int refine_iters);

// Log-spaced scan of alpha -> delta_plus(sigma_hat, alpha, q) with
// golden-section refinement in log-alpha. Requires grid.lo > 0.
ScalarOptimum grid_sup_alpha(double sigma_hat, const RdpQuery& q,
                             const GridSpec& grid);
ScalarOptimum grid_sup_alpha(double sigma_hat, const RdpQuery& q);

// Exhaustive scan over quantizer boundary placements drawn from the grid
// (n = 2 or 3 cells, centroid levels). Returns the Pareto-minimal
// (entropy, distortion) pairs sorted by entropy. Throws std::invalid_argument
// when n is unsupported or the scan would exceed 1e7 evaluations.
std::vector<RateDistortionPoint> brute_quantizer_search(
    const GaussianSource& source, int n, const GridSpec& boundary_grid);

// Adaptive Simpson quadrature with the usual |S2 - S1|/15 error estimate.
// Throws std::runtime_error if the recursion depth is exhausted.
QuadratureResult adaptive_quadrature(const std::function<double(double)>& f,
                                     double a, double b, double tol);

}  // namespace gaussrdp
