#include "gaussrdp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gaussrdp {
namespace {

constexpr double kInvGolden = 0.6180339887498949;

void require_measure(const RdpQuery& q, PerceptionMeasure m, const char* op) {
  if (q.measure != m) {
    throw std::invalid_argument(std::string(op) + ": wrong perception measure");
  }
}

struct ScalarMin {
  double arg;
  double value;
};

// Uniform grid scan (ties broken toward the first index) followed by
// golden-section refinement in the bracket around the best grid point.
// Robust to objectives that are not known to be unimodal.
template <typename F>
ScalarMin minimize_on_interval(F&& f, double lo, double hi, int grid_points) {
  if (!(hi > lo)) return {lo, f(lo)};
  const double width = hi - lo;
  const double step = width / (grid_points - 1);
  int best_i = 0;
  double best_x = lo;
  double best_v = f(lo);
  for (int i = 1; i < grid_points; ++i) {
    const double x = (i == grid_points - 1) ? hi : lo + i * step;
    const double v = f(x);
    if (v < best_v) {
      best_v = v;
      best_i = i;
      best_x = x;
    }
  }
  double a = std::max(lo, lo + (best_i - 1) * step);
  double b = std::min(hi, lo + (best_i + 1) * step);
  double x1 = b - kInvGolden * (b - a);
  double x2 = a + kInvGolden * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < 90 && (b - a) > 1e-13 * width; ++it) {
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
  ScalarMin out{best_x, best_v};
  if (f1 < out.value) out = {x1, f1};
  if (f2 < out.value) out = {x2, f2};
  return out;
}

// Objective of the plain W2 lower bound at a given reconstruction std.
double lower_w2_objective(double sigma_hat, const RdpQuery& q) {
  const double sx = q.source.std_dev();
  const double inner =
      positive_part(sx * exp_neg(q.rate + q.common_randomness) -
                    std::sqrt(q.perception.get()));
  const double rad = positive_part(sigma_hat * sigma_hat - inner * inner);
  return q.source.variance + sigma_hat * sigma_hat -
         2.0 * sx * std::sqrt(one_minus_exp_neg_two(q.rate) * rad);
}

// Closed-form minimizer of the plain W2 lower bound, dispatched on
// s = sqrt(P)/sigma_X against the printed case boundaries.
double lower_w2_minimizer(const RdpQuery& q) {
  const double sx = q.source.std_dev();
  const double sqrt_p = std::sqrt(q.perception.get());
  const double s = sqrt_p / sx;
  const double big_e = exp_neg(q.rate + q.common_randomness);
  const double root_one_m_z = std::sqrt(one_minus_exp_neg_two(q.rate));
  const double w = 1.0 - root_one_m_z;
  const double denom = 2.0 - 2.0 * big_e;
  const double nu_rc =
      denom > 0.0 ? (exp_neg_two(q.rate) -
                     exp_neg_two(q.rate + q.common_randomness)) /
                        denom
                  : 1.0;  // R = Rc = 0: only the first and last cases remain
  if (s >= std::max(w, big_e)) {
    return sx * root_one_m_z;
  }
  if (s >= big_e) {  // s in [big_e, w)
    return sx - sqrt_p;
  }
  if (s >= nu_rc) {  // s in [nu_rc, big_e)
    const double t = sx * big_e - sqrt_p;
    return std::sqrt(q.source.variance * one_minus_exp_neg_two(q.rate) + t * t);
  }
  return sx - sqrt_p;  // s < min(nu_rc, big_e)
}

// Min-sup objective of the improved W2 lower bound: the fixed inner term is
// replaced by delta_+ evaluated at its closed-form maximizer.
double improved_w2_objective(double sigma_hat, const RdpQuery& q) {
  double d = 0.0;
  if (delta_sup_positive(sigma_hat, q)) {
    d = delta_plus(sigma_hat, alpha_hat(sigma_hat, q), q);
  }
  const double rad = positive_part(sigma_hat * sigma_hat - d * d);
  return q.source.variance + sigma_hat * sigma_hat -
         2.0 * q.source.std_dev() *
             std::sqrt(one_minus_exp_neg_two(q.rate) * rad);
}

}  // namespace

bool delta_sup_positive(double sigma_hat, const RdpQuery& q) {
  // Positive iff P < sigma_X^2 + sigma_hat^2
  //                 - 2 sigma_X sigma_hat sqrt(1 - e^{-2(R+Rc)}).
  const double sx = q.source.std_dev();
  const double bound =
      q.source.variance + sigma_hat * sigma_hat -
      2.0 * sx * sigma_hat *
          std::sqrt(one_minus_exp_neg_two(q.rate + q.common_randomness));
  return q.perception.get() < bound;
}

BoundResult lower_kl(const RdpQuery& q) {
  require_measure(q, PerceptionMeasure::kKL, "lower_kl");
  const double sx = q.source.std_dev();
  const double var = q.source.variance;
  const double lo = sigma_of_p(q.perception, q.source);
  const double one_m_z = one_minus_exp_neg_two(q.rate);
  const auto objective = [&](double sigma_hat) {
    if (sigma_hat <= 0.0) return var;  // product term vanishes with sigma_hat
    // P - psi(sigma_hat) >= 0 on [sigma(P), sigma_X]; clamp rounding residue.
    double budget;
    if (q.perception.is_infinite()) {
      budget = q.perception.get();
    } else {
      budget = positive_part(q.perception.get() - psi(sigma_hat, q.source));
    }
    const double arg = q.rate.get() + q.common_randomness.get() + budget;
    const double factor = -std::expm1(-2.0 * arg);
    return var + sigma_hat * sigma_hat -
           2.0 * sx * sigma_hat * std::sqrt(one_m_z * factor);
  };
  const ScalarMin m = minimize_on_interval(objective, lo, sx, 4097);
  return {positive_part(m.value), m.arg, std::nullopt};
}

BoundResult upper_kl(const RdpQuery& q) {
  require_measure(q, PerceptionMeasure::kKL, "upper_kl");
  const double sx = q.source.std_dev();
  const double xi_v = xi(q.rate, q.common_randomness);
  const double sp = sigma_of_p(q.perception, q.source);
  const double clamp = positive_part(sp - sx * xi_v);
  return {q.source.variance - q.source.variance * xi_v * xi_v + clamp * clamp,
          std::nullopt, std::nullopt};
}

BoundResult lower_w2(const RdpQuery& q) {
  require_measure(q, PerceptionMeasure::kW2Sq, "lower_w2");
  const double sigma_hat = lower_w2_minimizer(q);
  return {positive_part(lower_w2_objective(sigma_hat, q)), sigma_hat,
          std::nullopt};
}

BoundResult upper_w2(const RdpQuery& q) {
  require_measure(q, PerceptionMeasure::kW2Sq, "upper_w2");
  const double sx = q.source.std_dev();
  const double xi_v = xi(q.rate, q.common_randomness);
  const double clamp =
      positive_part(sx - std::sqrt(q.perception.get()) - sx * xi_v);
  return {q.source.variance - q.source.variance * xi_v * xi_v + clamp * clamp,
          std::nullopt, std::nullopt};
}

double delta_plus(double sigma_hat, double alpha, const RdpQuery& q) {
  if (!(alpha > 0.0)) {
    throw std::domain_error("delta_plus: alpha must be positive");
  }
  const double sx = q.source.std_dev();
  const double num = sx * exp_neg(q.rate + q.common_randomness);
  // The radicand sigma_X^2 - alpha (sigma_X^2 + sigma_hat^2 - P) +
  // alpha^2 sigma_hat^2 is regrouped as a sum of two terms that are both
  // nonnegative whenever P >= (sigma_X - sigma_hat)^2, which holds on the
  // minimization domain; the grouped form is free of the cancellation the
  // expanded form suffers where the radicand vanishes.
  const double gap = sx - sigma_hat;
  const double p_excess = q.perception.get() - gap * gap;  // inf when P = inf
  if (alpha >= 1e-2) {
    const double lead = sx - alpha * sigma_hat;
    const double rad = positive_part(lead * lead + alpha * p_excess);
    return positive_part(num - std::sqrt(rad)) / alpha;
  }
  // Small alpha: divide through by alpha before subtracting so the two
  // diverging halves are formed explicitly and their difference clamps
  // cleanly. Below ~1e-150 the leading term overflows; the limit is 0.
  if (alpha < 1e-150) return 0.0;
  const double lead = sx / alpha - sigma_hat;
  const double rad = positive_part(lead * lead + p_excess / alpha);
  return positive_part(num / alpha - std::sqrt(rad));
}

double alpha_hat(double sigma_hat, const RdpQuery& q) {
  if (!delta_sup_positive(sigma_hat, q)) {
    throw std::logic_error(
        "alpha_hat: supremum of delta_+ is not positive at this sigma_hat");
  }
  const double var = q.source.variance;
  const double sx = q.source.std_dev();
  const double a_coef = var + sigma_hat * sigma_hat - q.perception.get();
  const double big_e = exp_neg(q.rate + q.common_randomness);
  const double one_m_z2 = one_minus_exp_neg_two(q.rate + q.common_randomness);
  // 4 var sigma_hat^2 - a_coef^2, factored so neither factor cancels on the
  // minimization domain; the expanded difference would lose half its digits
  // exactly where the discriminant vanishes (sigma_hat = sigma_X - sqrt(P)).
  const double gap = sx - sigma_hat;
  const double sum = sx + sigma_hat;
  double disc = (q.perception.get() - gap * gap) *
                (sum * sum - q.perception.get());
  if (disc < 0.0) {
    const double scale = 4.0 * var * sigma_hat * sigma_hat + a_coef * a_coef;
    if (disc < -1e-12 * scale) {
      throw std::runtime_error("alpha_hat: negative discriminant beyond rounding");
    }
    disc = 0.0;
  }
  // Rationalized smaller/positive root of
  //   (a_coef^2 - 4 var sigma_hat^2 z2) alpha^2
  //   - 4 var a_coef (1 - z2) alpha + 4 var^2 (1 - z2) = 0,
  // free of cancellation for every sign of the leading coefficient and exact
  // in both degenerate cases.
  return 2.0 * var * one_m_z2 /
         (a_coef * one_m_z2 + big_e * std::sqrt(one_m_z2 * disc));
}

BoundResult improved_lower_w2(const RdpQuery& q) {
  require_measure(q, PerceptionMeasure::kW2Sq, "improved_lower_w2");
  const bool rate_interior = q.rate.is_finite() && q.rate.get() > 0.0;
  const bool rc_interior =
      q.common_randomness.is_finite() && q.common_randomness.get() > 0.0;
  bool strict = rate_interior && rc_interior && q.perception.get() > 0.0;
  if (strict) {
    const ThresholdResult p_star = strictness_threshold_p(
        q.rate.get(), q.common_randomness.get(), q.source);
    strict = q.perception.is_finite() &&
             q.perception.get() < p_star.threshold.get();
  }
  if (!strict) {
    // The min-sup bound coincides with the plain bound here; report the plain
    // value so the gap is exactly zero.
    BoundResult base = lower_w2(q);
    if (base.minimizer_sigma && delta_sup_positive(*base.minimizer_sigma, q)) {
      base.maximizer_alpha = alpha_hat(*base.minimizer_sigma, q);
    }
    return base;
  }
  const double sx = q.source.std_dev();
  const double lo = positive_part(sx - std::sqrt(q.perception.get()));
  const auto objective = [&](double sigma_hat) {
    return improved_w2_objective(sigma_hat, q);
  };
  const ScalarMin m = minimize_on_interval(objective, lo, sx, 2049);
  BoundResult out{positive_part(m.value), m.arg, std::nullopt};
  if (delta_sup_positive(m.arg, q)) {
    out.maximizer_alpha = alpha_hat(m.arg, q);
  }
  return out;
}

ThresholdResult strictness_threshold_p(double rate, double common_randomness,
                                       const GaussianSource& source) {
  if (!std::isfinite(rate) || rate < 0.0 || !std::isfinite(common_randomness) ||
      common_randomness < 0.0) {
    throw std::domain_error(
        "strictness_threshold_p: rate and common randomness must be finite and >= 0");
  }
  const double value =
      source.variance * (2.0 - std::exp(-2.0 * rate) -
                         2.0 * xi(ExtReal(rate), ExtReal(common_randomness)));
  return {ExtReal(positive_part(value)), ThresholdRegime::kClosedForm};
}

ThresholdResult strictness_threshold_r(double common_randomness,
                                       ExtReal perception,
                                       const GaussianSource& source) {
  if (!std::isfinite(common_randomness) || common_randomness <= 0.0) {
    throw std::domain_error(
        "strictness_threshold_r: common randomness must lie in (0, inf)");
  }
  if (!(perception.get() > 0.0)) {
    throw std::domain_error("strictness_threshold_r: perception must be > 0");
  }
  if (perception.get() >= source.variance) {
    return {ExtReal(0.0), ThresholdRegime::kPerceptionAboveVariance};
  }
  const double var = source.variance;
  const double p = perception.get();
  const double e2rc = std::exp(-2.0 * common_randomness);
  const double zeta1 = 4.0 * e2rc - 1.0;
  const double zeta2 = 4.0 * e2rc + 2.0 * p / var;
  const double zeta3 = (4.0 * var - p) * p / (var * var);
  double disc = zeta2 * zeta2 - 4.0 * zeta1 * zeta3;
  if (disc < 0.0) {
    if (disc < -1e-12 * zeta2 * zeta2) {
      throw std::runtime_error(
          "strictness_threshold_r: negative discriminant beyond rounding");
    }
    disc = 0.0;
  }
  // Rationalized root: continuous through zeta1 = 0, where it degenerates to
  // the linear solution zeta3/zeta2.
  const double z_hat = 2.0 * zeta3 / (zeta2 + std::sqrt(disc));
  const bool linear = std::abs(zeta1) <= 1e-12 * (4.0 * e2rc + 1.0);
  return {ExtReal(positive_part(-0.5 * std::log(z_hat))),
          linear ? ThresholdRegime::kCommonRandomnessLogTwo
                 : ThresholdRegime::kQuadraticRoot};
}

BoundResult induced_lower_kl(const RdpQuery& q) {
  require_measure(q, PerceptionMeasure::kKL, "induced_lower_kl");
  const double mapped =
      2.0 * q.source.variance * one_minus_exp_neg(q.perception);
  const RdpQuery w2_query{q.source, q.rate, q.common_randomness,
                          ExtReal(mapped), PerceptionMeasure::kW2Sq};
  return lower_w2(w2_query);
}

BoundResult induced_upper_w2(const RdpQuery& q) {
  require_measure(q, PerceptionMeasure::kW2Sq, "induced_upper_w2");
  const ExtReal mapped = q.perception.is_infinite()
                             ? ExtReal::infinity()
                             : nu_of_p(q.perception.get(), q.source);
  const RdpQuery kl_query{q.source, q.rate, q.common_randomness, mapped,
                          PerceptionMeasure::kKL};
  return upper_kl(kl_query);
}

}  // namespace gaussrdp
