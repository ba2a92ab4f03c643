#include "gaussrdp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gaussrdp/bounds.hpp"
#include "gaussrdp/gaussian.hpp"

namespace gaussrdp {
namespace {

constexpr double kInvGolden = 0.6180339887498949;

// Golden-section minimization of f on [a, b] for a fixed iteration count.
template <typename F>
ScalarOptimum golden_min(F&& f, double a, double b, int iters) {
  double x1 = b - kInvGolden * (b - a);
  double x2 = a + kInvGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvGolden * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvGolden * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? ScalarOptimum{x1, f1} : ScalarOptimum{x2, f2};
}

// Mass and first standardized moment of the source over (z_lo, z_hi] in
// standard units; centroid levels and distortion follow from these.
struct CellMass {
  double mass;
  double first;  // integral of z * pdf(z) over the cell
};

CellMass standardized_cell(double z_lo, double z_hi) {
  const double mass = std_normal_cdf(z_hi) - std_normal_cdf(z_lo);
  const double pdf_lo = std::isinf(z_lo) ? 0.0 : std_normal_pdf(z_lo);
  const double pdf_hi = std::isinf(z_hi) ? 0.0 : std_normal_pdf(z_hi);
  return {mass, pdf_lo - pdf_hi};
}

// (entropy, distortion) of a centroid-level quantizer with the given
// standardized boundaries. Distortion uses E[(X - X_hat)^2] =
// var * (1 - sum first_i^2 / mass_i).
RateDistortionPoint centroid_point(const GaussianSource& source,
                                   const std::vector<double>& z_bounds) {
  double captured = 0.0;
  double entropy = 0.0;
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= z_bounds.size(); ++i) {
    const double next = i < z_bounds.size()
                            ? z_bounds[i]
                            : std::numeric_limits<double>::infinity();
    const CellMass c = standardized_cell(prev, next);
    if (c.mass > 0.0) {
      captured += c.first * c.first / c.mass;
      entropy -= c.mass * std::log(c.mass);
    }
    prev = next;
  }
  return {entropy, source.variance * (1.0 - captured)};
}

}  // namespace

GridSpec::GridSpec(double lo_in, double hi_in, int points_in)
    : lo(lo_in), hi(hi_in), points(points_in) {
  if (!(lo < hi) || points < 3) {
    throw std::invalid_argument("GridSpec: need lo < hi and points >= 3");
  }
}

ScalarOptimum grid_min_sigma(const std::function<double(double)>& objective,
                             const GridSpec& interval, int refine_iters) {
  const double step = (interval.hi - interval.lo) / (interval.points - 1);
  int best_i = 0;
  ScalarOptimum best{interval.lo, objective(interval.lo)};
  for (int i = 1; i < interval.points; ++i) {
    const double x =
        (i == interval.points - 1) ? interval.hi : interval.lo + i * step;
    const double v = objective(x);
    if (v < best.value) {
      best = {x, v};
      best_i = i;
    }
  }
  const double a = std::max(interval.lo, interval.lo + (best_i - 1) * step);
  const double b = std::min(interval.hi, interval.lo + (best_i + 1) * step);
  const ScalarOptimum refined = golden_min(objective, a, b, refine_iters);
  return refined.value < best.value ? refined : best;
}

ScalarOptimum grid_sup_alpha(double sigma_hat, const RdpQuery& q,
                             const GridSpec& grid) {
  if (!(grid.lo > 0.0)) {
    throw std::invalid_argument("grid_sup_alpha: grid.lo must be positive");
  }
  const double log_lo = std::log(grid.lo);
  const double log_step =
      (std::log(grid.hi) - log_lo) / (grid.points - 1);
  const auto neg_delta = [&](double t) {
    return -delta_plus(sigma_hat, std::exp(t), q);
  };
  int best_i = 0;
  double best_t = log_lo;
  double best_v = neg_delta(log_lo);
  for (int i = 1; i < grid.points; ++i) {
    const double t = log_lo + i * log_step;
    const double v = neg_delta(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
      best_i = i;
    }
  }
  const double a = log_lo + std::max(0, best_i - 1) * log_step;
  const double b = log_lo + std::min(grid.points - 1, best_i + 1) * log_step;
  ScalarOptimum refined = golden_min(neg_delta, a, b, 90);
  if (best_v < refined.value) refined = {best_t, best_v};
  return {std::exp(refined.argument), -refined.value};
}

ScalarOptimum grid_sup_alpha(double sigma_hat, const RdpQuery& q) {
  return grid_sup_alpha(sigma_hat, q, GridSpec(1e-3, 1e3, 2001));
}

std::vector<RateDistortionPoint> brute_quantizer_search(
    const GaussianSource& source, int n, const GridSpec& boundary_grid) {
  if (n != 2 && n != 3) {
    throw std::invalid_argument("brute_quantizer_search: n must be 2 or 3");
  }
  const long long p = boundary_grid.points;
  const long long combos = n == 2 ? p : p * (p - 1) / 2;
  if (combos > 10'000'000) {
    throw std::invalid_argument(
        "brute_quantizer_search: scan exceeds the 1e7 evaluation budget");
  }
  const double sx = source.std_dev();
  const double step = (boundary_grid.hi - boundary_grid.lo) /
                      (boundary_grid.points - 1);
  const auto z_of = [&](int i) {
    return (boundary_grid.lo + i * step - source.mean) / sx;
  };
  std::vector<RateDistortionPoint> all;
  all.reserve(static_cast<std::size_t>(combos));
  if (n == 2) {
    for (int i = 0; i < boundary_grid.points; ++i) {
      all.push_back(centroid_point(source, {z_of(i)}));
    }
  } else {
    for (int i = 0; i < boundary_grid.points; ++i) {
      for (int j = i + 1; j < boundary_grid.points; ++j) {
        all.push_back(centroid_point(source, {z_of(i), z_of(j)}));
      }
    }
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.entropy != b.entropy ? a.entropy < b.entropy
                                  : a.distortion < b.distortion;
  });
  std::vector<RateDistortionPoint> pareto;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& pt : all) {
    if (pt.distortion < best_d) {
      pareto.push_back(pt);
      best_d = pt.distortion;
    }
  }
  return pareto;
}

namespace {

double simpson(double fa, double fm, double fb, double width) {
  return width / 6.0 * (fa + 4.0 * fm + fb);
}

QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double fa, double fm,
                                  double fb, double whole, double tol,
                                  int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-14 * std::abs(m)) {
    return {left + right + delta / 15.0, std::abs(delta) / 15.0};
  }
  if (depth >= 60) {
    throw std::runtime_error("adaptive_quadrature: recursion depth exhausted");
  }
  const QuadratureResult l =
      adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
  const QuadratureResult r =
      adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  return {l.value + r.value, l.error + r.error};
}

}  // namespace

QuadratureResult adaptive_quadrature(const std::function<double(double)>& f,
                                     double a, double b, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("adaptive_quadrature: tol must be positive");
  }
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = simpson(fa, fm, fb, b - a);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 0);
}

}  // namespace gaussrdp
