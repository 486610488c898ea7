#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relaylife/lifetime.hpp"

namespace relaylife {

enum class SweepVariable { RelayCount, UpdateInterval };
const char* sweep_variable_name(SweepVariable v);

double db_to_linear(double db);
double dbm_to_watts(double dbm);

// Default testbed model: 10 kbps data rate, -70 dB reference gain, -134 dBm
// noise, path-loss exponent 3.5, unit path-loss constant, mod index 2.
SystemParams default_system_params();
SimConfig default_sim_config();

// Monte-Carlo sweep description. Defaults describe the standard testbed:
// six sources in a 100 m square, BS at the center, 10 J per node, SER target
// 1e-4, update interval 60 packets, averaged over 300 random topologies.
struct ExperimentSpec {
  double area_side_m = 100.0;
  Vec2 bs_position{50.0, 50.0};
  int num_sources = 6;
  int num_relays = 20;
  double initial_energy_j = 10.0;
  int topology_count = 300;
  std::uint64_t seed = 1;
  SweepVariable sweep = SweepVariable::RelayCount;
  std::vector<double> sweep_values;
  std::vector<Strategy> strategies = Strategy::all();
  SimConfig sim = default_sim_config();
  int threads = 0;  // 0 means hardware concurrency

  void validate() const;
};

struct ResultRow {
  std::string strategy;
  std::string sweep_name;
  double sweep_value = 0.0;
  double mean_lifetime_packets = 0.0;
  double mean_energy_per_packet_j = 0.0;
  double mean_wasted_energy_j = 0.0;
  int n_topologies = 0;
  std::uint64_t seed = 0;

  bool operator==(const ResultRow&) const = default;
};

// Nodes drawn i.i.d. uniform over the square from a per-index PRNG stream:
// mt19937_64 seeded with splitmix64(seed ^ 0x9E3779B97F4A7C15 * (index + 1)).
// Draws closer than 1 m to the BS or an already-placed node are rejected.
Topology generate_topology(std::uint64_t seed, int index,
                           const ExperimentSpec& spec);

// Runs every (sweep value, strategy) cell over a common topology set so that
// strategy comparisons are paired, and averages per cell. Rows come back
// sorted by strategy name, then sweep value.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

// CSV with one header row; '#' lines carry reproducibility metadata.
std::string emit_csv(std::span<const ResultRow> rows);
std::vector<ResultRow> parse_csv(std::string_view text);

// Flat key=value experiment configuration. The seed starts from
// default_seed() and an explicit `seed =` line wins over it.
ExperimentSpec parse_config(std::string_view text);
ExperimentSpec load_config(const std::string& path);

// Built-in sweeps: figure 1 is lifetime vs relay count; figures 2-4 share a
// lifetime/energy sweep vs update interval at twenty relays. Seeded from
// default_seed().
ExperimentSpec figure_spec(int figure);

// Topology file: one node per line, `kind x_m y_m energy_j` with kind one of
// x (source), r (relay), bs (base station; energy ignored).
Topology parse_topology(std::string_view text);
Topology load_topology_file(const std::string& path);

// RELAYLIFE_SEED environment variable, or 1 when unset.
std::uint64_t default_seed();

}  // namespace relaylife
