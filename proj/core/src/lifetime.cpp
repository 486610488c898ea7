#include "relaylife/lifetime.hpp"

#include <algorithm>
#include <stdexcept>

namespace relaylife {

void SimConfig::validate() const {
  params.validate();
  strategy.validate();
  if (!(ser_target > 0.0) || !(ser_target < 1.0))
    throw std::invalid_argument("sim config: SER target must be in (0, 1)");
  if (update_interval_packets < 1)
    throw std::invalid_argument("sim config: update interval must be >= 1");
  if (!(packet_bits > 0.0) || !(data_rate_bps > 0.0))
    throw std::invalid_argument("sim config: packet size and data rate must be > 0");
  if (max_packets < 0)
    throw std::invalid_argument("sim config: packet cap must be >= 0");
}

LifetimeResult run_lifetime(const Topology& topology, const SimConfig& config) {
  config.validate();
  const PairBasis basis = PairBasis::build(topology, config.params);
  const int num_sources = basis.num_sources;
  const int num_relays = basis.num_relays;
  const double packet_seconds = config.packet_seconds();

  NetworkState state;
  state.residual_energy.reserve(num_sources + num_relays);
  for (const Node& s : topology.sources) state.residual_energy.push_back(s.energy);
  for (const Node& r : topology.relays) state.residual_energy.push_back(r.energy);

  const std::vector<double> ser_targets(num_sources, config.ser_target);
  std::vector<int> relay_of(num_sources, -1);
  std::vector<double> source_cost(num_sources, 0.0), relay_cost(num_sources, 0.0);

  LifetimeResult result;

  const auto reassign = [&] {
    const std::span<const double> residual(state.residual_energy);
    state.assignment =
        assign(basis, residual.subspan(0, num_sources),
               residual.subspan(num_sources, num_relays), config.strategy,
               ser_targets, config.srs_order);
    for (const AssignedPair& p : state.assignment.pairs) {
      relay_of[p.source] = p.relay;
      source_cost[p.source] = p.source_power * packet_seconds;
      relay_cost[p.source] = p.relay_power * packet_seconds;
    }
    if (config.record_timeline)
      result.timeline.push_back(UpdateSnapshot{state.packets_delivered,
                                               state.residual_energy,
                                               state.assignment});
  };

  reassign();

  while (true) {
    if (state.packets_delivered >= config.max_packets) {
      result.truncated = true;
      break;
    }
    const int source = static_cast<int>(state.packets_delivered % num_sources);
    const int relay_node = num_sources + relay_of[source];
    // Expired as soon as either endpoint cannot afford this transmission.
    if (state.residual_energy[source] < source_cost[source]) {
      result.dying_node = source;
      break;
    }
    if (state.residual_energy[relay_node] < relay_cost[source]) {
      result.dying_node = relay_node;
      break;
    }
    state.residual_energy[source] -= source_cost[source];
    state.residual_energy[relay_node] -= relay_cost[source];
    result.consumed_energy += source_cost[source] + relay_cost[source];
    ++state.packets_delivered;
    ++state.packets_since_update;
    if (state.packets_since_update == config.update_interval_packets) {
      state.packets_since_update = 0;
      // A node drained to exactly zero cannot enter a power allocation; its
      // death is due within the next round, so keep the current assignment.
      const bool depleted =
          std::any_of(state.residual_energy.begin(), state.residual_energy.end(),
                      [](double e) { return e <= 0.0; });
      if (!depleted) reassign();
    }
  }

  result.lifetime_packets = state.packets_delivered;
  result.final_residual_energy = state.residual_energy;
  const EnergyMetrics metrics = energy_metrics(result, topology);
  result.avg_energy_per_packet = metrics.avg_energy_per_packet;
  result.wasted_energy = metrics.wasted_energy;
  return result;
}

EnergyMetrics energy_metrics(const LifetimeResult& result,
                             const Topology& topology) {
  if (result.final_residual_energy.size() !=
      static_cast<size_t>(topology.num_sources() + topology.num_relays()))
    throw std::invalid_argument("energy_metrics: result does not match topology");
  EnergyMetrics metrics;
  if (result.lifetime_packets > 0)
    metrics.avg_energy_per_packet =
        result.consumed_energy / static_cast<double>(result.lifetime_packets);
  for (double e : result.final_residual_energy) metrics.wasted_energy += e;
  return metrics;
}

}  // namespace relaylife
