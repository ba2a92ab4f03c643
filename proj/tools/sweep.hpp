#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gaussrdp/oracle.hpp"
#include "gaussrdp/query.hpp"

namespace gaussrdp::cli {

enum class SweepVariable { kRate, kCommonRandomness, kPerception, kTheta, kLambda };

// One curve sweep: the swept variable, its grid, the remaining fixed query
// fields, and the named output columns.
struct SweepConfig {
  SweepVariable variable = SweepVariable::kRate;
  GridSpec range{0.0, 1.0, 101};
  RdpQuery fixed{GaussianSource(0.0, 1.0), 0.0, 0.0, ExtReal::infinity(),
                 PerceptionMeasure::kKL};
  std::vector<std::string> outputs;
  bool normalize = false;
  int n_max = 24;  // lambda sweeps only
};

// Figure presets 2..6 (source N(0,1)):
//   2: Rc=0, P=0.1, sweep R, KL bounds and the induced lower bound
//   3: Rc=0, P=0.1, sweep R, W2 bounds and the induced upper bound
//   4: R=0.1, Rc=0.1, sweep P, min-sup gap
//   5: Rc=0.1, P=0.1, sweep R, min-sup gap
//   6: Rc=0, P=inf, sweep R over (0, log 2], binary bound vs upper bound
SweepConfig figure_preset(int figure);

// Validates the config (swept variable not fixed twice, outputs nonempty and
// known, measure compatible), evaluates the grid (parallel over threads,
// rows emitted in index order), and writes the CSV.
void run_sweep(const SweepConfig& config, std::ostream& out, int threads);

}  // namespace gaussrdp::cli
