#include "gaussrdp/ecsq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gaussrdp/rng.hpp"

namespace gaussrdp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinCellMass = 1e-12;
constexpr double kCostTol = 1e-10;
constexpr int kMaxIterations = 10000;

// Closed-form moments of the source over one cell (z_lo, z_hi] in
// standardized coordinates: mass, integral of z, integral of z^2.
struct CellMoments {
  double mass;
  double first;
  double second;
};

CellMoments cell_moments(double z_lo, double z_hi) {
  const double mass = std_normal_cdf(z_hi) - std_normal_cdf(z_lo);
  const double pdf_lo = std::isinf(z_lo) ? 0.0 : std_normal_pdf(z_lo);
  const double pdf_hi = std::isinf(z_hi) ? 0.0 : std_normal_pdf(z_hi);
  const double lo_term = std::isinf(z_lo) ? 0.0 : z_lo * pdf_lo;
  const double hi_term = std::isinf(z_hi) ? 0.0 : z_hi * pdf_hi;
  return {mass, pdf_lo - pdf_hi, mass + lo_term - hi_term};
}

struct DesignState {
  std::vector<double> z_levels;  // ascending, standardized
  std::vector<double> probs;
};

// Cell boundaries induced by levels and probabilities under the cost
// (x - y_i)^2 - lambda log p_i: the midpoint shifted by the probability
// advantage. Returns false if the boundaries fail to ascend, naming the
// level to prune.
bool boundaries_from_levels(const DesignState& s, double lambda,
                            std::vector<double>* z_bounds, int* prune) {
  const int n = static_cast<int>(s.z_levels.size());
  z_bounds->clear();
  for (int i = 0; i + 1 < n; ++i) {
    if (s.probs[i] < kMinCellMass || s.probs[i + 1] < kMinCellMass) {
      *prune = s.probs[i] <= s.probs[i + 1] ? i : i + 1;
      return false;
    }
    const double a = s.z_levels[i];
    const double b = s.z_levels[i + 1];
    const double shift =
        lambda > 0.0 ? lambda * std::log(s.probs[i] / s.probs[i + 1]) /
                           (2.0 * (b - a))
                     : 0.0;
    z_bounds->push_back(0.5 * (a + b) + shift);
  }
  for (int i = 0; i + 1 < static_cast<int>(z_bounds->size()); ++i) {
    if ((*z_bounds)[i] >= (*z_bounds)[i + 1]) {
      // The cell between the crossing boundaries has non-positive width.
      *prune = i + 1;
      return false;
    }
  }
  *prune = -1;
  return true;
}

QuantizerMetrics evaluate(const std::vector<double>& z_bounds,
                          const std::vector<double>& z_levels,
                          const GaussianSource& source, double lambda,
                          std::vector<double>* probs) {
  QuantizerMetrics m;
  probs->clear();
  double prev = -kInf;
  for (std::size_t i = 0; i < z_levels.size(); ++i) {
    const double next = i < z_bounds.size() ? z_bounds[i] : kInf;
    const CellMoments c = cell_moments(prev, next);
    const double y = z_levels[i];
    m.distortion +=
        source.variance * (c.second - 2.0 * y * c.first + y * y * c.mass);
    if (c.mass > 0.0) m.entropy -= c.mass * std::log(c.mass);
    probs->push_back(c.mass);
    prev = next;
  }
  m.lagrangian_cost = m.distortion + lambda * m.entropy;
  return m;
}

}  // namespace

BinaryQuantizerResult binary_quantizer(double theta,
                                       const GaussianSource& source) {
  if (!(theta >= 0.0)) {
    throw std::domain_error("binary_quantizer: theta must be >= 0");
  }
  const double sx = source.std_dev();
  const double q = std_normal_cdf(theta);        // lower-cell mass
  const double qbar = 0.5 * std::erfc(theta / std::numbers::sqrt2);
  if (qbar <= 0.0) {
    // Upper cell mass underflows; the quantizer degenerates to one cell.
    return {Quantizer{{}, {source.mean}, {1.0}}, 0.0, source.variance};
  }
  const double spike = sx * std_normal_pdf(theta);
  const double low = source.mean - spike / q;
  const double high = source.mean + spike / qbar;
  const double rate = -q * std::log(q) - qbar * std::log(qbar);
  const double distortion =
      source.variance -
      source.variance * std::exp(-theta * theta) /
          (2.0 * std::numbers::pi * q * qbar);
  Quantizer quant{{source.mean + theta * sx}, {low, high}, {q, qbar}};
  return {std::move(quant), rate, distortion};
}

double binary_bound_at_rate(double rate, const GaussianSource& source) {
  constexpr double kLog2 = 0.6931471805599453;
  if (!(rate > 0.0) || rate > kLog2) {
    throw std::domain_error(
        "binary_bound_at_rate: rate must lie in (0, log 2]");
  }
  // rate(theta) decreases strictly from log 2 at theta = 0; grow the bracket
  // until it straddles the target, then bisect.
  double lo = 0.0;
  double hi = 8.0;
  while (binary_quantizer(hi, source).rate > rate) hi *= 2.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-14 * (1.0 + hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (binary_quantizer(mid, source).rate > rate) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return binary_quantizer(0.5 * (lo + hi), source).distortion;
}

namespace {

std::pair<Quantizer, QuantizerMetrics> run_lloyd(const GaussianSource& source,
                                                 double lambda,
                                                 std::vector<double> z_levels,
                                                 std::vector<double>* cost_trace) {
  DesignState s;
  s.z_levels = std::move(z_levels);
  // Seed probabilities from midpoint cells.
  std::vector<double> z_bounds;
  {
    s.probs.assign(s.z_levels.size(), 0.0);
    std::vector<double> mid;
    for (std::size_t i = 0; i + 1 < s.z_levels.size(); ++i) {
      mid.push_back(0.5 * (s.z_levels[i] + s.z_levels[i + 1]));
    }
    evaluate(mid, s.z_levels, source, lambda, &s.probs);
  }

  double prev_cost = kInf;
  QuantizerMetrics metrics;
  for (int iter = 0;; ++iter) {
    if (iter >= kMaxIterations) {
      throw std::runtime_error(
          "design_ecsq: no convergence after " + std::to_string(iter) +
          " iterations (last cost " + std::to_string(prev_cost) + ")");
    }
    int prune = -1;
    while (s.z_levels.size() > 1 &&
           !boundaries_from_levels(s, lambda, &z_bounds, &prune)) {
      s.z_levels.erase(s.z_levels.begin() + prune);
      s.probs.erase(s.probs.begin() + prune);
    }
    if (s.z_levels.size() == 1) {
      z_bounds.clear();
      s.z_levels[0] = 0.0;
      metrics = evaluate(z_bounds, s.z_levels, source, lambda, &s.probs);
      break;
    }
    // Drop cells whose mass collapsed, then recompute from scratch.
    std::vector<double> mass(s.z_levels.size());
    {
      double prev = -kInf;
      for (std::size_t i = 0; i < s.z_levels.size(); ++i) {
        const double next = i < z_bounds.size() ? z_bounds[i] : kInf;
        mass[i] = cell_moments(prev, next).mass;
        prev = next;
      }
    }
    bool pruned = false;
    for (int i = static_cast<int>(mass.size()) - 1; i >= 0; --i) {
      if (mass[i] < kMinCellMass) {
        s.z_levels.erase(s.z_levels.begin() + i);
        s.probs.erase(s.probs.begin() + i);
        pruned = true;
      }
    }
    if (pruned) continue;
    // Centroid and probability update.
    {
      double prev = -kInf;
      for (std::size_t i = 0; i < s.z_levels.size(); ++i) {
        const double next = i < z_bounds.size() ? z_bounds[i] : kInf;
        const CellMoments c = cell_moments(prev, next);
        s.z_levels[i] = c.first / c.mass;
        s.probs[i] = c.mass;
        prev = next;
      }
    }
    metrics = evaluate(z_bounds, s.z_levels, source, lambda, &s.probs);
    if (cost_trace) cost_trace->push_back(metrics.lagrangian_cost);
    if (prev_cost - metrics.lagrangian_cost < kCostTol && iter > 0) break;
    prev_cost = metrics.lagrangian_cost;
  }

  const double sx = source.std_dev();
  Quantizer out;
  for (double b : z_bounds) out.boundaries.push_back(source.mean + sx * b);
  for (double z : s.z_levels) out.levels.push_back(source.mean + sx * z);
  out.probabilities = s.probs;
  return {std::move(out), metrics};
}

std::vector<double> quantile_start(int n_max, std::uint64_t seed) {
  std::vector<double> z;
  for (int k = 1; k <= n_max; ++k) {
    z.push_back(std_normal_quantile(static_cast<double>(k) / (n_max + 1)));
  }
  if (seed != 0) {
    RandomStream rs(seed);
    for (double& v : z) v += rs.next_uniform(-0.1, 0.1);
    std::sort(z.begin(), z.end());
  }
  return z;
}

}  // namespace

std::pair<Quantizer, QuantizerMetrics> design_ecsq(const GaussianSource& source,
                                                   double lambda, int n_max,
                                                   std::uint64_t seed,
                                                   std::vector<double>* cost_trace) {
  if (!(lambda >= 0.0)) {
    throw std::domain_error("design_ecsq: lambda must be >= 0");
  }
  if (n_max < 1) {
    throw std::domain_error("design_ecsq: n_max must be >= 1");
  }
  return run_lloyd(source, lambda, quantile_start(n_max, seed), cost_trace);
}

std::pair<Quantizer, QuantizerMetrics> design_ecsq_multistart(
    const GaussianSource& source, double lambda, int n_max,
    std::uint64_t seed) {
  std::pair<Quantizer, QuantizerMetrics> best =
      design_ecsq(source, lambda, n_max, 0);
  // Auxiliary starts are candidate generators only; one that fails to settle
  // within the iteration budget is dropped rather than surfaced.
  const auto consider = [&](std::vector<double> z_levels) {
    try {
      auto cand = run_lloyd(source, lambda, std::move(z_levels), nullptr);
      if (cand.second.lagrangian_cost < best.second.lagrangian_cost) {
        best = std::move(cand);
      }
    } catch (const std::runtime_error&) {
    }
  };
  consider(quantile_start(n_max, 2 * seed + 1));
  consider(quantile_start(n_max, 2 * seed + 2));
  // Deadzone starts: one central level plus levels fanned outward from a set
  // of widths. They cover the low-rate optima, which alternation cannot
  // reach from quantile starts; below the low-rate regime they only waste
  // iterations, so they are skipped.
  if (lambda >= 0.5) {
    for (double t : {1.6, 2.2, 2.8, 3.4, 4.2}) {
      std::vector<double> z{0.0};
      for (int j = 0; static_cast<int>(z.size()) + 2 <= std::min(n_max, 9);
           ++j) {
        z.push_back(t + 0.8 * j);
        z.push_back(-(t + 0.8 * j));
      }
      if (static_cast<int>(z.size()) <= n_max) {
        std::sort(z.begin(), z.end());
        consider(std::move(z));
      }
      // Asymmetric split: the two-cell optimum in this regime is a heavy
      // cell plus a far light cell, which the symmetric start cannot reach.
      if (n_max >= 2) consider({-0.2, t});
    }
  }
  return best;
}

std::vector<RateDistortionPoint> trace_de_curve(
    const GaussianSource& source, const std::vector<double>& lambda_schedule,
    int n_max) {
  if (lambda_schedule.empty()) {
    throw std::domain_error("trace_de_curve: schedule must be nonempty");
  }
  std::vector<RateDistortionPoint> points;
  points.push_back({0.0, source.variance});  // one-cell quantizer, always valid
  for (std::size_t li = 0; li < lambda_schedule.size(); ++li) {
    const double lambda = lambda_schedule[li];
    if (!(lambda > 0.0)) {
      throw std::domain_error("trace_de_curve: lambdas must be positive");
    }
    const auto [quant, metrics] =
        design_ecsq_multistart(source, lambda, n_max, li);
    points.push_back({metrics.entropy, metrics.distortion});
  }
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.entropy != b.entropy ? a.entropy < b.entropy
                                  : a.distortion < b.distortion;
  });
  // Lower convex hull over (entropy, distortion).
  std::vector<RateDistortionPoint> hull;
  for (const auto& p : points) {
    if (!hull.empty() && p.entropy == hull.back().entropy) continue;
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull[hull.size() - 1];
      const double cross = (b.entropy - a.entropy) * (p.distortion - a.distortion) -
                           (b.distortion - a.distortion) * (p.entropy - a.entropy);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  // Keep only the decreasing part: past the distortion minimum the hull
  // carries no information.
  std::size_t cut = hull.size();
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (hull[i].distortion >= hull[i - 1].distortion) {
      cut = i;
      break;
    }
  }
  hull.resize(cut);
  return hull;
}

double hull_distortion_at(const std::vector<RateDistortionPoint>& hull,
                          double entropy) {
  if (hull.empty() || entropy < hull.front().entropy ||
      entropy > hull.back().entropy) {
    throw std::domain_error("hull_distortion_at: entropy outside hull span");
  }
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (entropy <= hull[i].entropy) {
      const auto& a = hull[i - 1];
      const auto& b = hull[i];
      const double t = (entropy - a.entropy) / (b.entropy - a.entropy);
      return a.distortion + t * (b.distortion - a.distortion);
    }
  }
  return hull.back().distortion;
}

double shannon_dr(ExtReal rate, const GaussianSource& source) {
  return source.variance * exp_neg_two(rate);
}

double overline_de_expansion(double rate, double common_randomness,
                             const GaussianSource& source) {
  if (!std::isfinite(rate) || rate < 0.0 || !std::isfinite(common_randomness) ||
      common_randomness < 0.0) {
    throw std::domain_error(
        "overline_de_expansion: rate and common randomness must be finite and >= 0");
  }
  return source.variance *
         (1.0 - 2.0 * rate + 2.0 * rate * std::exp(-2.0 * common_randomness));
}

}  // namespace gaussrdp
