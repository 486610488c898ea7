#include "relaylife/assignment.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace relaylife {

void Strategy::validate() const {
  const bool ok =
      (policy == Policy::Glm && (algorithm == Algorithm::Bottleneck ||
                                 algorithm == Algorithm::MinBottleneck ||
                                 algorithm == Algorithm::GreedyPriority)) ||
      (policy == Policy::Mwtp && (algorithm == Algorithm::MinWeightSum ||
                                  algorithm == Algorithm::GreedyPriority));
  if (!ok)
    throw std::invalid_argument(
        "strategy: valid combinations are GLM-BM, GLM-MBM, GLM-SRS, "
        "MWTP-MWM, MWTP-SRS");
}

std::string Strategy::name() const {
  std::string out = policy_name(policy);
  out += '-';
  switch (algorithm) {
    case Algorithm::Bottleneck: out += "BM"; break;
    case Algorithm::MinBottleneck: out += "MBM"; break;
    case Algorithm::MinWeightSum: out += "MWM"; break;
    case Algorithm::GreedyPriority: out += "SRS"; break;
  }
  return out;
}

Strategy Strategy::parse(const std::string& name) {
  for (const Strategy& s : all())
    if (s.name() == name) return s;
  throw std::invalid_argument("strategy: unknown name '" + name +
                              "' (expected GLM-BM, GLM-MBM, GLM-SRS, "
                              "MWTP-MWM or MWTP-SRS)");
}

const std::vector<Strategy>& Strategy::all() {
  static const std::vector<Strategy> strategies = {
      {Policy::Glm, Algorithm::Bottleneck},
      {Policy::Glm, Algorithm::MinBottleneck},
      {Policy::Glm, Algorithm::GreedyPriority},
      {Policy::Mwtp, Algorithm::MinWeightSum},
      {Policy::Mwtp, Algorithm::GreedyPriority},
  };
  return strategies;
}

PairBasis PairBasis::build(const Topology& topology, const SystemParams& params) {
  topology.validate();
  params.validate();
  PairBasis basis;
  basis.num_sources = topology.num_sources();
  basis.num_relays = topology.num_relays();
  basis.coeff.reserve(static_cast<size_t>(basis.num_sources) * basis.num_relays);
  for (int i = 0; i < basis.num_sources; ++i)
    for (int j = 0; j < basis.num_relays; ++j)
      basis.coeff.push_back(ser_coefficients(topology, i, j, params));
  basis.source_bs_variance.reserve(basis.num_sources);
  for (int i = 0; i < basis.num_sources; ++i)
    basis.source_bs_variance.push_back(link_variance(
        distance(topology.sources[i].position, topology.bs_position), params));
  return basis;
}

double priority_metric(double source_energy, double source_bs_variance) {
  if (!(source_energy > 0.0) || !(source_bs_variance > 0.0))
    throw std::invalid_argument("priority_metric: arguments must be > 0");
  return 1.0 / (source_energy * source_bs_variance);
}

namespace {

std::vector<double> energies_of(const std::vector<Node>& nodes) {
  std::vector<double> out;
  out.reserve(nodes.size());
  for (const Node& n : nodes) out.push_back(n.energy);
  return out;
}

void check_ser_targets(std::span<const double> ser_targets, int num_sources) {
  if (static_cast<int>(ser_targets.size()) != num_sources)
    throw std::invalid_argument("expected one SER target per source");
}

}  // namespace

WeightMatrix build_weight_matrix(const PairBasis& basis,
                                 std::span<const double> source_energy,
                                 std::span<const double> relay_energy,
                                 Policy policy,
                                 std::span<const double> ser_targets) {
  check_ser_targets(ser_targets, basis.num_sources);
  if (static_cast<int>(source_energy.size()) != basis.num_sources ||
      static_cast<int>(relay_energy.size()) != basis.num_relays)
    throw std::invalid_argument("build_weight_matrix: energy vector sizes");

  std::vector<double> block(static_cast<size_t>(basis.num_sources) *
                            basis.num_relays);
  for (int i = 0; i < basis.num_sources; ++i)
    for (int j = 0; j < basis.num_relays; ++j)
      block[static_cast<size_t>(i) * basis.num_relays + j] = pair_weight(
          policy, PairContext{basis.at(i, j), source_energy[i], relay_energy[j],
                              ser_targets[i]});
  return WeightMatrix::padded(block, basis.num_sources, basis.num_relays);
}

WeightMatrix build_weight_matrix(const Topology& topology,
                                 const SystemParams& params, Policy policy,
                                 std::span<const double> ser_targets) {
  const PairBasis basis = PairBasis::build(topology, params);
  return build_weight_matrix(basis, energies_of(topology.sources),
                             energies_of(topology.relays), policy, ser_targets);
}

Matching srs_select(const WeightMatrix& w, std::span<const double> priorities,
                    SrsOrder order) {
  w.validate();
  if (static_cast<int>(priorities.size()) != w.m_real)
    throw std::invalid_argument("srs_select: one priority per real source");

  Matching m;
  m.pairing.assign(w.n, -1);
  std::vector<char> source_done(w.m_real, 0), relay_taken(w.n, 0);

  for (int step = 0; step < w.m_real; ++step) {
    int best_source = -1;
    for (int i = 0; i < w.m_real; ++i) {
      if (source_done[i]) continue;
      if (best_source < 0) {
        best_source = i;
        continue;
      }
      const bool better = order == SrsOrder::HighestFirst
                              ? priorities[i] > priorities[best_source]
                              : priorities[i] < priorities[best_source];
      if (better) best_source = i;  // ties keep the lower index
    }
    int best_relay = -1;
    for (int j = 0; j < w.n; ++j) {
      if (relay_taken[j]) continue;
      if (best_relay < 0 || w.at(best_source, j) < w.at(best_source, best_relay))
        best_relay = j;
    }
    source_done[best_source] = 1;
    relay_taken[best_relay] = 1;
    m.pairing[best_source] = best_relay;
  }

  // Leftover columns onto the dummy rows, in index order.
  int next_dummy = w.m_real;
  for (int j = 0; j < w.n; ++j)
    if (!relay_taken[j]) m.pairing[next_dummy++] = j;
  return m;
}

Assignment assign(const PairBasis& basis, std::span<const double> source_energy,
                  std::span<const double> relay_energy, const Strategy& strategy,
                  std::span<const double> ser_targets, SrsOrder srs_order) {
  strategy.validate();
  const WeightMatrix w = build_weight_matrix(basis, source_energy, relay_energy,
                                             strategy.policy, ser_targets);
  Matching m;
  switch (strategy.algorithm) {
    case Algorithm::Bottleneck:
      m = bottleneck_matching(w).matching;
      break;
    case Algorithm::MinBottleneck:
      m = minimum_bottleneck_matching(w).matching;
      break;
    case Algorithm::MinWeightSum:
      m = hungarian_min_weight(w).matching;
      break;
    case Algorithm::GreedyPriority: {
      std::vector<double> priorities(basis.num_sources);
      for (int i = 0; i < basis.num_sources; ++i)
        priorities[i] =
            priority_metric(source_energy[i], basis.source_bs_variance[i]);
      m = srs_select(w, priorities, srs_order);
      break;
    }
  }

  Assignment out;
  out.pairs.reserve(basis.num_sources);
  for (int i = 0; i < basis.num_sources; ++i) {
    const int j = m.pairing[i];
    const PairContext ctx{basis.at(i, j), source_energy[i], relay_energy[j],
                          ser_targets[i]};
    const PairAllocation alloc = strategy.policy == Policy::Glm
                                     ? glm_allocate(ctx)
                                     : mwtp_allocate(ctx);
    out.pairs.push_back(
        AssignedPair{i, j, alloc.source_power, alloc.relay_power, alloc.weight});
  }
  return out;
}

Assignment assign(const Topology& topology, const SystemParams& params,
                  const Strategy& strategy, std::span<const double> ser_targets,
                  SrsOrder srs_order) {
  const PairBasis basis = PairBasis::build(topology, params);
  return assign(basis, energies_of(topology.sources), energies_of(topology.relays),
                strategy, ser_targets, srs_order);
}

}  // namespace relaylife
