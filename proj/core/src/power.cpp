#include "relaylife/power.hpp"

#include <cmath>
#include <stdexcept>

namespace relaylife {

const char* policy_name(Policy policy) {
  return policy == Policy::Glm ? "GLM" : "MWTP";
}

void PairContext::validate() const {
  if (!(coeff.a > 0.0) || !(coeff.b > 0.0))
    throw std::invalid_argument("pair context: SER coefficients must be > 0");
  if (!(source_energy > 0.0) || !(relay_energy > 0.0))
    throw std::invalid_argument("pair context: residual energies must be > 0");
  if (!(ser_target > 0.0) || !(ser_target < 1.0))
    throw std::invalid_argument("pair context: SER target must be in (0, 1)");
}

PairAllocation glm_allocate(const PairContext& ctx) {
  ctx.validate();
  const double num = ctx.coeff.a * ctx.relay_energy + ctx.coeff.b * ctx.source_energy;
  const double ps = std::sqrt(num / (ctx.relay_energy * ctx.ser_target));
  const double pr = ps * ctx.relay_energy / ctx.source_energy;
  const double weight = std::sqrt(num / (ctx.source_energy * ctx.source_energy *
                                         ctx.relay_energy * ctx.ser_target));
  return PairAllocation{ps, pr, weight};
}

PairAllocation mwtp_allocate(const PairContext& ctx) {
  ctx.validate();
  const double a = ctx.coeff.a;
  const double b = ctx.coeff.b;
  // c*(c+8) instead of c^2+8c: c spans many orders of magnitude.
  const double c = b * ctx.source_energy / (a * ctx.relay_energy);
  const double root = std::sqrt(c * (c + 8.0));
  const double ps = std::sqrt(a * (2.0 + c + root) / (2.0 * ctx.ser_target));
  const double denom = ctx.ser_target * ps * ps - a;
  if (!(denom > 0.0))
    throw std::logic_error("mwtp_allocate: relay-power denominator not positive");
  const double pr = b * ps / denom;
  const double weight = ps / ctx.source_energy + pr / ctx.relay_energy;
  return PairAllocation{ps, pr, weight};
}

double pair_weight(Policy policy, const PairContext& ctx) {
  return policy == Policy::Glm ? glm_allocate(ctx).weight
                               : mwtp_allocate(ctx).weight;
}

}  // namespace relaylife
