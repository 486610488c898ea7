#pragma once

#include <span>
#include <vector>

#include "relaylife/assignment.hpp"

// Exhaustive-search references for small instances. These never touch the
// matching solvers, so they can sit on the other side of a cross-check.
namespace relaylife::oracle {

enum class Objective { MinSum, MinBottleneck, LexBottleneck };

inline constexpr int kMaxOracleSources = 7;
inline constexpr int kMaxOracleRelays = 8;

struct MatrixSolution {
  Matching matching;
  double total = 0.0;                       // over real rows
  double bottleneck = 0.0;                  // max over real rows
  std::vector<double> sorted_weights_desc;  // real-row weights, descending
};

// Enumerates every perfect matching of the padded matrix (n <= 8) and keeps
// the best under the objective. Refuses larger inputs.
MatrixSolution exhaustive_matching(const WeightMatrix& w, Objective objective);

// Exhaustive relay assignment for a topology (sources <= 7, relays <= 8),
// with powers allocated per policy on the winning pairs.
Assignment oracle_assign(const Topology& topology, const SystemParams& params,
                         Policy policy, Objective objective,
                         std::span<const double> ser_targets);

}  // namespace relaylife::oracle
