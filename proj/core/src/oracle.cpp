#include "relaylife/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace relaylife::oracle {

namespace {

struct Candidate {
  double total = 0.0;
  double bottleneck = 0.0;
  std::vector<double> sorted_desc;
};

Candidate evaluate(const WeightMatrix& w, std::span<const int> pairing) {
  Candidate c;
  c.sorted_desc.reserve(w.m_real);
  for (int i = 0; i < w.m_real; ++i) {
    const double v = w.at(i, pairing[i]);
    c.total += v;
    c.sorted_desc.push_back(v);
  }
  std::sort(c.sorted_desc.begin(), c.sorted_desc.end(), std::greater<>());
  c.bottleneck = c.sorted_desc.empty() ? 0.0 : c.sorted_desc.front();
  return c;
}

bool better(const Candidate& a, const Candidate& b, Objective objective) {
  switch (objective) {
    case Objective::MinSum:
      return a.total < b.total;
    case Objective::MinBottleneck:
      return a.bottleneck < b.bottleneck;
    case Objective::LexBottleneck:
      return std::lexicographical_compare(a.sorted_desc.begin(), a.sorted_desc.end(),
                                          b.sorted_desc.begin(), b.sorted_desc.end());
  }
  return false;
}

}  // namespace

MatrixSolution exhaustive_matching(const WeightMatrix& w, Objective objective) {
  w.validate();
  if (w.n > kMaxOracleRelays)
    throw std::invalid_argument(
        "exhaustive_matching: refused, matrix larger than 8x8");

  std::vector<int> pairing(w.n);
  std::iota(pairing.begin(), pairing.end(), 0);

  Candidate best;
  std::vector<int> best_pairing;
  do {
    Candidate c = evaluate(w, pairing);
    if (best_pairing.empty() || better(c, best, objective)) {
      best = std::move(c);
      best_pairing = pairing;
    }
  } while (std::next_permutation(pairing.begin(), pairing.end()));

  MatrixSolution sol;
  sol.matching.pairing = std::move(best_pairing);
  sol.total = best.total;
  sol.bottleneck = best.bottleneck;
  sol.sorted_weights_desc = std::move(best.sorted_desc);
  return sol;
}

Assignment oracle_assign(const Topology& topology, const SystemParams& params,
                         Policy policy, Objective objective,
                         std::span<const double> ser_targets) {
  topology.validate();
  if (topology.num_sources() > kMaxOracleSources ||
      topology.num_relays() > kMaxOracleRelays)
    throw std::invalid_argument(
        "oracle_assign: refused, instance larger than 7 sources / 8 relays");

  const WeightMatrix w =
      build_weight_matrix(topology, params, policy, ser_targets);
  const MatrixSolution sol = exhaustive_matching(w, objective);

  const PairBasis basis = PairBasis::build(topology, params);
  Assignment out;
  out.pairs.reserve(topology.num_sources());
  for (int i = 0; i < topology.num_sources(); ++i) {
    const int j = sol.matching.pairing[i];
    const PairContext ctx{basis.at(i, j), topology.sources[i].energy,
                          topology.relays[j].energy, ser_targets[i]};
    const PairAllocation alloc =
        policy == Policy::Glm ? glm_allocate(ctx) : mwtp_allocate(ctx);
    out.pairs.push_back(
        AssignedPair{i, j, alloc.source_power, alloc.relay_power, alloc.weight});
  }
  return out;
}

}  // namespace relaylife::oracle
