#pragma once

#include "gaussrdp/extended_real.hpp"
#include "gaussrdp/gaussian.hpp"

namespace gaussrdp {

enum class PerceptionMeasure { kKL, kW2Sq };

// One bound query: source, coding rate R, common-randomness rate Rc, and the
// perception budget P under the chosen measure. Rates are in nats; the
// perception budget is in nats for KL and in source units squared for W2^2.
struct RdpQuery {
  GaussianSource source;
  ExtReal rate;
  ExtReal common_randomness;
  ExtReal perception;
  PerceptionMeasure measure;
};

}  // namespace gaussrdp
