#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "csv.hpp"
#include "gaussrdp/bounds.hpp"
#include "gaussrdp/ecsq.hpp"

namespace gaussrdp::cli {
namespace {

constexpr double kLog2 = 0.6931471805599453;

bool needs_measure(SweepVariable v) {
  return v == SweepVariable::kRate || v == SweepVariable::kCommonRandomness ||
         v == SweepVariable::kPerception;
}

const std::vector<std::string>& known_outputs() {
  static const std::vector<std::string> k = {
      "lower",         "improved_lower", "upper",  "gap",
      "induced_lower", "induced_upper",  "shannon", "binary_bound"};
  return k;
}

std::string variable_column(SweepVariable v) {
  switch (v) {
    case SweepVariable::kRate: return "rate";
    case SweepVariable::kCommonRandomness: return "common_randomness";
    case SweepVariable::kPerception: return "perception";
    case SweepVariable::kTheta: return "theta";
    case SweepVariable::kLambda: return "lambda";
  }
  return {};
}

RdpQuery query_at(const SweepConfig& c, double x) {
  RdpQuery q = c.fixed;
  switch (c.variable) {
    case SweepVariable::kRate: q.rate = ExtReal(x); break;
    case SweepVariable::kCommonRandomness: q.common_randomness = ExtReal(x); break;
    case SweepVariable::kPerception: q.perception = ExtReal(x); break;
    default: break;
  }
  return q;
}

double column_value(const std::string& name, const RdpQuery& q) {
  const bool w2 = q.measure == PerceptionMeasure::kW2Sq;
  if (name == "lower") return (w2 ? lower_w2(q) : lower_kl(q)).value;
  if (name == "upper") return (w2 ? upper_w2(q) : upper_kl(q)).value;
  if (name == "improved_lower") {
    if (!w2) throw std::invalid_argument("improved_lower needs --measure w2");
    return improved_lower_w2(q).value;
  }
  if (name == "gap") {
    if (!w2) throw std::invalid_argument("gap needs --measure w2");
    return improved_lower_w2(q).value - lower_w2(q).value;
  }
  if (name == "induced_lower") {
    if (w2) throw std::invalid_argument("induced_lower needs --measure kl");
    return induced_lower_kl(q).value;
  }
  if (name == "induced_upper") {
    if (!w2) throw std::invalid_argument("induced_upper needs --measure w2");
    return induced_upper_w2(q).value;
  }
  if (name == "shannon") return shannon_dr(q.rate, q.source);
  if (name == "binary_bound") {
    const double r = q.rate.get();
    if (!(r > 0.0) || r > kLog2) {
      throw std::domain_error("binary_bound needs rate in (0, log 2]");
    }
    return binary_bound_at_rate(r, q.source);
  }
  throw std::invalid_argument("unknown output column '" + name + "'");
}

}  // namespace

SweepConfig figure_preset(int figure) {
  SweepConfig c;
  const GaussianSource std_normal(0.0, 1.0);
  switch (figure) {
    case 2:
      c.variable = SweepVariable::kRate;
      c.range = GridSpec(0.0, 2.0, 201);
      c.fixed = RdpQuery{std_normal, 0.0, 0.0, 0.1, PerceptionMeasure::kKL};
      c.outputs = {"upper", "lower", "induced_lower"};
      break;
    case 3:
      c.variable = SweepVariable::kRate;
      c.range = GridSpec(0.0, 2.0, 201);
      c.fixed = RdpQuery{std_normal, 0.0, 0.0, 0.1, PerceptionMeasure::kW2Sq};
      c.outputs = {"induced_upper", "upper", "lower"};
      break;
    case 4:
      c.variable = SweepVariable::kPerception;
      c.range = GridSpec(0.0, 1.0, 1001);
      c.fixed = RdpQuery{std_normal, 0.1, 0.1, 0.0, PerceptionMeasure::kW2Sq};
      c.outputs = {"improved_lower", "lower", "gap"};
      break;
    case 5:
      c.variable = SweepVariable::kRate;
      c.range = GridSpec(0.0, 2.0, 2001);
      c.fixed = RdpQuery{std_normal, 0.0, 0.1, 0.1, PerceptionMeasure::kW2Sq};
      c.outputs = {"improved_lower", "lower", "gap"};
      break;
    case 6:
      c.variable = SweepVariable::kRate;
      c.range = GridSpec(kLog2 / 100.0, kLog2, 100);
      c.fixed = RdpQuery{std_normal, 0.0, 0.0, ExtReal::infinity(),
                         PerceptionMeasure::kKL};
      c.outputs = {"upper", "binary_bound", "shannon"};
      break;
    default:
      throw std::invalid_argument("figure preset must be 2..6");
  }
  return c;
}

void run_sweep(const SweepConfig& config, std::ostream& out, int threads) {
  if (config.outputs.empty()) {
    throw std::invalid_argument("sweep: output selector list is empty");
  }
  for (const auto& name : config.outputs) {
    if (std::find(known_outputs().begin(), known_outputs().end(), name) ==
        known_outputs().end()) {
      throw std::invalid_argument("sweep: unknown output column '" + name + "'");
    }
  }
  const int n = config.range.points;
  const double step = (config.range.hi - config.range.lo) / (n - 1);
  std::vector<std::string> rows(n);
  const double var = config.fixed.source.variance;
  const double scale = config.normalize ? 1.0 / var : 1.0;

  const auto compute_row = [&](int i) {
    const double x =
        (i == n - 1) ? config.range.hi : config.range.lo + i * step;
    std::vector<std::string> cells;
    cells.push_back(format_value(x));
    if (config.variable == SweepVariable::kTheta) {
      const auto b = binary_quantizer(x, config.fixed.source);
      cells.push_back(format_value(b.rate));
      cells.push_back(format_value(b.distortion * scale));
    } else if (config.variable == SweepVariable::kLambda) {
      const auto [quant, metrics] =
          design_ecsq_multistart(config.fixed.source, x, config.n_max, 0);
      cells.push_back(format_value(metrics.entropy));
      cells.push_back(format_value(metrics.distortion * scale));
    } else {
      const RdpQuery q = query_at(config, x);
      for (const auto& name : config.outputs) {
        cells.push_back(format_value(column_value(name, q) * scale));
      }
    }
    rows[i] = join_row(cells);
  };

  if (config.variable == SweepVariable::kTheta ||
      config.variable == SweepVariable::kLambda) {
    // Quantizer columns have a fixed layout.
  } else if (needs_measure(config.variable)) {
    // Validate the selector/measure combination once up front so a bad flag
    // fails before any work is done.
    const RdpQuery probe = query_at(config, config.range.lo);
    for (const auto& name : config.outputs) column_value(name, probe);
  }

  int n_threads = threads > 0
                      ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = std::min(n_threads, n);
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      compute_row(i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<std::string> header{variable_column(config.variable)};
  if (config.variable == SweepVariable::kTheta ||
      config.variable == SweepVariable::kLambda) {
    header.push_back(config.variable == SweepVariable::kTheta ? "rate"
                                                              : "entropy");
    header.push_back("distortion");
  } else {
    for (const auto& name : config.outputs) header.push_back(name);
  }
  out << join_row(header);
  for (const auto& row : rows) out << row;
}

}  // namespace gaussrdp::cli
