#pragma once

#include "relaylife/channel.hpp"

namespace relaylife {

// Per-pair power management policy.
//   Glm: maximize the pair's first-node-death lifetime.
//   Mwtp: minimize the pair's residual-energy-weighted total power.
enum class Policy { Glm, Mwtp };

const char* policy_name(Policy policy);

// Residual state of one candidate source-relay pair.
struct PairContext {
  PairCoefficients coeff;
  double source_energy = 0.0;  // joules
  double relay_energy = 0.0;   // joules
  double ser_target = 0.0;     // end-to-end SER bound, in (0, 1)

  void validate() const;
};

// Transmit powers meeting the SER target with equality, plus the scalar
// weight the assignment stage optimizes. GLM weights are inverse pair
// lifetimes (1/s); MWTP weights are weighted total powers (W/J). Weights are
// comparable only within one policy.
struct PairAllocation {
  double source_power = 0.0;  // watts
  double relay_power = 0.0;   // watts
  double weight = 0.0;
};

// Closed-form optimum of the pair-lifetime maximization: both nodes of the
// pair deplete at the same instant and the SER constraint is tight.
PairAllocation glm_allocate(const PairContext& ctx);

// Closed-form optimum of the weighted-total-power minimization along the
// SER-equality curve.
PairAllocation mwtp_allocate(const PairContext& ctx);

// Weight of the pair under the given policy.
double pair_weight(Policy policy, const PairContext& ctx);

}  // namespace relaylife
