#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csv.hpp"
#include "gaussrdp/bounds.hpp"
#include "gaussrdp/verify.hpp"
#include "sweep.hpp"

namespace {

using namespace gaussrdp;
using namespace gaussrdp::cli;

struct CommonFlags {
  double mean = 0.0;
  double variance = 1.0;
  std::string rate = "0";
  std::string common = "0";
  std::string perception = "inf";
  std::string measure = "kl";
  bool normalize = false;
  std::string out_path;
  int threads = 0;
  std::uint64_t seed = 0;
};

PerceptionMeasure parse_measure(const std::string& m) {
  if (m == "kl") return PerceptionMeasure::kKL;
  if (m == "w2") return PerceptionMeasure::kW2Sq;
  throw CLI::ValidationError("--measure must be kl or w2");
}

RdpQuery build_query(const CommonFlags& f) {
  return RdpQuery{GaussianSource(f.mean, f.variance), ExtReal::parse(f.rate),
                  ExtReal::parse(f.common), ExtReal::parse(f.perception),
                  parse_measure(f.measure)};
}

// --threads, overridden by GAUSS_RDP_THREADS when set.
int effective_threads(int flag_value) {
  if (const char* env = std::getenv("GAUSS_RDP_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw std::invalid_argument("GAUSS_RDP_THREADS is not an integer");
    }
  }
  return flag_value;
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file " + path);
  return file;
}

int cmd_bound(const CommonFlags& f) {
  const RdpQuery q = build_query(f);
  const bool w2 = q.measure == PerceptionMeasure::kW2Sq;
  const double scale = f.normalize ? 1.0 / q.source.variance : 1.0;

  BoundResult low = w2 ? lower_w2(q) : lower_kl(q);
  BoundResult up = w2 ? upper_w2(q) : upper_kl(q);
  std::optional<BoundResult> improved;
  std::optional<BoundResult> induced_low;
  std::optional<BoundResult> induced_up;
  if (w2) {
    improved = improved_lower_w2(q);
    induced_up = induced_upper_w2(q);
  } else {
    induced_low = induced_lower_kl(q);
  }

  const auto opt_value = [&](const std::optional<BoundResult>& b) {
    return b ? format_value(b->value * scale) : std::string();
  };
  const auto opt_field = [&](const std::optional<double>& v) {
    return v ? format_value(*v) : std::string();
  };

  std::vector<std::string> header{
      "measure",       "mean",          "variance",       "rate",
      "common_randomness", "perception",    "lower",          "improved_lower",
      "upper",         "induced_lower", "induced_upper",  "lower_sigma",
      "improved_sigma", "improved_alpha"};
  std::vector<std::string> row{
      f.measure,
      format_value(q.source.mean),
      format_value(q.source.variance),
      format_value(q.rate.get()),
      format_value(q.common_randomness.get()),
      format_value(q.perception.get()),
      format_value(low.value * scale),
      opt_value(improved),
      format_value(up.value * scale),
      opt_value(induced_low),
      opt_value(induced_up),
      opt_field(low.minimizer_sigma),
      opt_field(improved ? improved->minimizer_sigma : std::nullopt),
      opt_field(improved ? improved->maximizer_alpha : std::nullopt)};

  std::ofstream file;
  std::ostream& out = open_output(f.out_path, file);
  out << join_row(header) << join_row(row);
  return 0;
}

int cmd_sweep(const CommonFlags& f, int figure, const std::string& variable,
              double min_v, double max_v, int steps,
              const std::string& outputs, int n_max) {
  SweepConfig config;
  if (figure != 0) {
    config = figure_preset(figure);
  } else {
    if (variable == "R") {
      config.variable = SweepVariable::kRate;
    } else if (variable == "Rc") {
      config.variable = SweepVariable::kCommonRandomness;
    } else if (variable == "P") {
      config.variable = SweepVariable::kPerception;
    } else if (variable == "theta") {
      config.variable = SweepVariable::kTheta;
    } else if (variable == "lambda") {
      config.variable = SweepVariable::kLambda;
    } else {
      throw CLI::ValidationError("--variable must be R, Rc, P, theta or lambda");
    }
    config.range = GridSpec(min_v, max_v, steps);
    config.fixed = build_query(f);
    config.n_max = n_max;
    if (!outputs.empty()) {
      std::string token;
      for (char c : outputs + ",") {
        if (c == ',') {
          if (!token.empty()) config.outputs.push_back(token);
          token.clear();
        } else {
          token += c;
        }
      }
    } else {
      if (config.fixed.measure == PerceptionMeasure::kW2Sq) {
        config.outputs = {"lower", "improved_lower", "upper", "gap",
                          "induced_upper"};
      } else {
        config.outputs = {"lower", "upper", "induced_lower"};
      }
    }
  }
  config.normalize = f.normalize;

  std::ofstream file;
  std::ostream& out = open_output(f.out_path, file);
  run_sweep(config, out, effective_threads(f.threads));
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int trials,
               int threads) {
  std::vector<CheckResult> results;
  const auto append = [&](std::vector<CheckResult> r) {
    results.insert(results.end(), r.begin(), r.end());
  };
  if (suite == "bounds" || suite == "all") append(run_bounds_suite(seed));
  if (suite == "talagrand" || suite == "all") {
    append(run_talagrand_suite(seed, trials, effective_threads(threads)));
  }
  if (suite == "ecsq" || suite == "all") append(run_ecsq_suite(seed));
  if (results.empty()) {
    throw CLI::ValidationError("--suite must be bounds, talagrand, ecsq or all");
  }
  bool all_ok = true;
  for (const auto& r : results) {
    all_ok = all_ok && r.passed;
    std::printf("[%s] %-38s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
  }
  std::printf("%s\n", all_ok ? "all checks passed" : "FAILURES present");
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian rate-distortion-perception bounds and quantizer curves"};
  app.require_subcommand(1);

  CommonFlags flags;
  const auto add_common = [&](CLI::App* sub, bool with_rate) {
    sub->add_option("--mean", flags.mean, "source mean");
    sub->add_option("--var", flags.variance, "source variance");
    if (with_rate) sub->add_option("--rate", flags.rate, "coding rate R, nats ('inf' ok)");
    sub->add_option("--common", flags.common, "common randomness rate Rc ('inf' ok)");
    sub->add_option("--perception", flags.perception,
                    "perception budget P ('inf' ok)");
    sub->add_option("--measure", flags.measure, "perception measure: kl or w2")
        ->check(CLI::IsMember({"kl", "w2"}));
    sub->add_flag("--normalize", flags.normalize,
                  "report distortions divided by the source variance");
    sub->add_option("--out", flags.out_path, "output file (default stdout)");
    sub->add_option("--threads", flags.threads,
                    "worker threads (default: machine parallelism)");
    sub->add_option("--seed", flags.seed, "random seed");
  };

  auto* bound = app.add_subcommand("bound", "evaluate all bounds at one query");
  add_common(bound, true);
  bound->get_option("--rate")->required();

  auto* sweep = app.add_subcommand("sweep", "trace bound curves to CSV");
  add_common(sweep, true);
  int figure = 0, steps = 101, n_max = 24;
  double min_v = 0.0, max_v = 1.0;
  std::string variable, outputs;
  sweep->add_option("--figure", figure, "preset 2..6");
  sweep->add_option("--variable", variable, "swept variable: R, Rc, P, theta, lambda");
  sweep->add_option("--min", min_v, "sweep start");
  sweep->add_option("--max", max_v, "sweep end");
  sweep->add_option("--steps", steps, "number of grid points");
  sweep->add_option("--outputs", outputs, "comma-separated output columns");
  sweep->add_option("--nmax", n_max, "max codebook size for lambda sweeps");

  auto* verify = app.add_subcommand("verify", "run the verification suites");
  std::string suite = "all";
  int trials = 1000;
  verify->add_option("--suite", suite, "bounds, talagrand, ecsq or all")
      ->check(CLI::IsMember({"bounds", "talagrand", "ecsq", "all"}));
  verify->add_option("--trials", trials, "Monte Carlo trials");
  verify->add_option("--seed", flags.seed, "random seed");
  verify->add_option("--threads", flags.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (bound->parsed()) return cmd_bound(flags);
    if (sweep->parsed()) {
      return cmd_sweep(flags, figure, variable, min_v, max_v, steps, outputs,
                       n_max);
    }
    return cmd_verify(suite, flags.seed, trials, flags.threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
