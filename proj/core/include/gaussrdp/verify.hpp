#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaussrdp/gaussian.hpp"
#include "gaussrdp/query.hpp"

namespace gaussrdp {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;
};

// Grid property suite over the bound family: sandwich ordering, monotonicity
// in each argument, induced-bound dominance, the strictness region of the
// min-sup bound, closed-form-vs-grid optimizer agreement, and the P = inf
// collapse. Deterministic given the seed.
std::vector<CheckResult> run_bounds_suite(std::uint64_t seed);

// Monte Carlo transportation-inequality sweep over seeded random mixtures.
// Trials are distributed over threads (0 = hardware concurrency) and merged
// in seed order, so the outcome is independent of the thread count.
std::vector<CheckResult> run_talagrand_suite(std::uint64_t seed, int trials,
                                             int threads);

// Quantizer-design invariants: centroid and orthogonality conditions, cell
// probabilities, Lagrangian descent, the ordering chain against the classical
// distortion-rate function, binary-bound dominance, and the traced-hull
// low-rate check. Deterministic given the seed.
std::vector<CheckResult> run_ecsq_suite(std::uint64_t seed);

// The default lambda schedule for tracing the quantizer hull, augmented by
// bisection on lambda so that the trace lands hull points near the target
// output entropy (the low-rate region is extremely sensitive to lambda).
std::vector<double> ecsq_lambda_schedule_with_target(
    const GaussianSource& source, int n_max, double target_entropy);

// Random query generator shared by the verification suites: N(0,1) source,
// rates in [0.02, 3], perception in (0, 1.2]. Deterministic given the seed.
RdpQuery random_w2_query(std::uint64_t seed);

}  // namespace gaussrdp
