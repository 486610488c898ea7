#pragma once

#include <span>
#include <string>
#include <vector>

#include "relaylife/channel.hpp"
#include "relaylife/matching.hpp"
#include "relaylife/power.hpp"

namespace relaylife {

// Matching algorithm of a strategy.
enum class Algorithm {
  Bottleneck,     // BM: minimize the largest pair weight
  MinBottleneck,  // MBM: minimize the sorted weight vector lexicographically
  MinWeightSum,   // MWM: minimize the weight sum (Hungarian)
  GreedyPriority  // SRS: sources pick greedily in priority order
};

// One of the five supported relay selection and power allocation strategies:
// GLM-BM, GLM-MBM, GLM-SRS, MWTP-MWM, MWTP-SRS.
struct Strategy {
  Policy policy = Policy::Glm;
  Algorithm algorithm = Algorithm::Bottleneck;

  void validate() const;  // rejects combinations outside the five above
  std::string name() const;
  static Strategy parse(const std::string& name);
  static const std::vector<Strategy>& all();
};

// Which end of the priority metric picks first in the greedy selection.
// HighestFirst serves energy-poor, far-from-BS sources first.
enum class SrsOrder { HighestFirst, LowestFirst };

struct AssignedPair {
  int source = -1;
  int relay = -1;
  double source_power = 0.0;  // watts
  double relay_power = 0.0;   // watts
  double weight = 0.0;
};

// A complete assignment: every source appears exactly once, relays at most
// once, powers meet the pair's SER target with equality.
struct Assignment {
  std::vector<AssignedPair> pairs;
};

// Geometry-derived per-pair SER coefficients and per-source source-BS channel
// variances, precomputed once per topology so that repeated re-assignments
// only depend on residual energies.
struct PairBasis {
  int num_sources = 0;
  int num_relays = 0;
  std::vector<PairCoefficients> coeff;     // row-major sources x relays
  std::vector<double> source_bs_variance;  // per source

  const PairCoefficients& at(int source, int relay) const {
    return coeff[static_cast<size_t>(source) * num_relays + relay];
  }
  static PairBasis build(const Topology& topology, const SystemParams& params);
};

// Greedy priority of a source node: high when its residual energy is low or
// its channel to the BS is weak.
double priority_metric(double source_energy, double source_bs_variance);

// Pair-weight matrix of a policy at the given residual energies, padded with
// zero rows to a square matrix.
WeightMatrix build_weight_matrix(const PairBasis& basis,
                                 std::span<const double> source_energy,
                                 std::span<const double> relay_energy,
                                 Policy policy,
                                 std::span<const double> ser_targets);
WeightMatrix build_weight_matrix(const Topology& topology,
                                 const SystemParams& params, Policy policy,
                                 std::span<const double> ser_targets);

// Greedy selection: repeatedly the unpaired source that is next in priority
// order takes the unpaired relay with the smallest weight in its row.
// Priority ties go to the lower source index, weight ties to the lower relay
// index. Dummy rows are filled with the leftover columns.
Matching srs_select(const WeightMatrix& w, std::span<const double> priorities,
                    SrsOrder order = SrsOrder::HighestFirst);

// Full relay selection and power allocation under a strategy.
Assignment assign(const PairBasis& basis, std::span<const double> source_energy,
                  std::span<const double> relay_energy, const Strategy& strategy,
                  std::span<const double> ser_targets,
                  SrsOrder srs_order = SrsOrder::HighestFirst);
Assignment assign(const Topology& topology, const SystemParams& params,
                  const Strategy& strategy, std::span<const double> ser_targets,
                  SrsOrder srs_order = SrsOrder::HighestFirst);

}  // namespace relaylife
