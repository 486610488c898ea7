#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "relaylife/assignment.hpp"

namespace relaylife {

// Update interval that exceeds any reachable packet count, i.e. never update.
inline constexpr std::int64_t kNeverUpdate =
    std::numeric_limits<std::int64_t>::max();

struct SimConfig {
  SystemParams params;
  double ser_target = 1e-4;                       // common to all sources
  std::int64_t update_interval_packets = 60;      // network-total packets
  double packet_bits = 2500.0;
  double data_rate_bps = 10e3;
  Strategy strategy;
  SrsOrder srs_order = SrsOrder::HighestFirst;
  std::int64_t max_packets = 100'000'000;         // safety cap
  bool record_timeline = false;

  double packet_seconds() const { return packet_bits / data_rate_bps; }
  void validate() const;
};

// Mutable simulation state. Node ids: sources are 0..M-1, relays M..M+N-1.
struct NetworkState {
  std::vector<double> residual_energy;  // joules, per node id
  Assignment assignment;
  std::int64_t packets_delivered = 0;
  std::int64_t packets_since_update = 0;
};

struct UpdateSnapshot {
  std::int64_t packets_delivered = 0;
  std::vector<double> residual_energy;
  Assignment assignment;
};

struct LifetimeResult {
  std::int64_t lifetime_packets = 0;
  int dying_node = -1;  // -1 when truncated by the packet cap
  std::optional<double> avg_energy_per_packet;  // absent for zero-packet runs
  double wasted_energy = 0.0;    // residual total at expiry, joules
  double consumed_energy = 0.0;  // joules
  bool truncated = false;
  std::vector<double> final_residual_energy;  // per node id
  std::vector<UpdateSnapshot> timeline;       // filled when recording
};

struct EnergyMetrics {
  std::optional<double> avg_energy_per_packet;
  double wasted_energy = 0.0;
};

// Packet-granular first-node-death simulation. Sources transmit round-robin;
// each packet drains transmit energy from the scheduled source and its relay;
// assignment and powers are recomputed from residual energies after every
// update interval. The network expires at the first packet whose source or
// relay cannot afford its transmit energy.
LifetimeResult run_lifetime(const Topology& topology, const SimConfig& config);

// Energy accounting of a completed run.
EnergyMetrics energy_metrics(const LifetimeResult& result,
                             const Topology& topology);

}  // namespace relaylife
