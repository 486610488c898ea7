// relaylife command line: relay assignment, lifetime simulation and the
// Monte-Carlo sweeps behind the shipped result tables.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "relaylife/experiment.hpp"
#include "relaylife/oracle.hpp"

namespace {

using namespace relaylife;

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

struct SpecOverrides {
  std::uint64_t seed = default_seed();
  int topologies = 0;  // 0 = keep spec value
  int threads = 0;
  bool seed_set = false;

  void apply(ExperimentSpec& spec) const {
    if (seed_set) spec.seed = seed;
    if (topologies > 0) spec.topology_count = topologies;
    if (threads > 0) spec.threads = threads;
  }
};

void add_override_options(CLI::App* cmd, SpecOverrides& ov) {
  cmd->add_option("--seed", ov.seed, "PRNG seed (default: RELAYLIFE_SEED or 1)")
      ->each([&ov](const std::string&) { ov.seed_set = true; });
  cmd->add_option("--topologies", ov.topologies,
                  "override the number of random topologies");
  cmd->add_option("--threads", ov.threads, "worker threads (default: all cores)");
}

int cmd_assign(const std::string& topology_path, const std::string& strategy_name,
               double ser_target, bool srs_lowest_first) {
  const Topology topo = load_topology_file(topology_path);
  const Strategy strategy = Strategy::parse(strategy_name);
  const std::vector<double> targets(topo.num_sources(), ser_target);
  const Assignment a =
      assign(topo, default_system_params(), strategy, targets,
             srs_lowest_first ? SrsOrder::LowestFirst : SrsOrder::HighestFirst);

  std::cout << "strategy=" << strategy.name() << " sources=" << topo.num_sources()
            << " relays=" << topo.num_relays() << " ser_target=" << fmt(ser_target)
            << "\n";
  double max_weight = 0.0, sum_weight = 0.0;
  for (const AssignedPair& p : a.pairs) {
    std::cout << "source=" << p.source << " relay=" << p.relay
              << " source_power_w=" << fmt(p.source_power)
              << " relay_power_w=" << fmt(p.relay_power)
              << " weight=" << fmt(p.weight) << "\n";
    max_weight = std::max(max_weight, p.weight);
    sum_weight += p.weight;
  }
  std::cout << "max_weight=" << fmt(max_weight) << " sum_weight=" << fmt(sum_weight)
            << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, int figure,
                 const SpecOverrides& ov, const std::string& out_path) {
  ExperimentSpec spec =
      config_path.empty() ? figure_spec(figure) : load_config(config_path);
  ov.apply(spec);
  const std::vector<ResultRow> rows = run_experiment(spec);
  const std::string csv = emit_csv(rows);
  if (out_path.empty() || out_path == "-")
    std::cout << csv;
  else
    write_file(out_path, csv);
  return 0;
}

int cmd_sweep(std::vector<int> figures, const SpecOverrides& ov,
              const std::string& out_dir) {
  if (figures.empty()) figures = {1, 2, 3, 4};
  std::sort(figures.begin(), figures.end());
  figures.erase(std::unique(figures.begin(), figures.end()), figures.end());
  std::filesystem::create_directories(out_dir);

  // Figures 2-4 plot different columns of the same sweep; run it once.
  std::string shared_csv;
  for (int fig : figures) {
    ExperimentSpec spec = figure_spec(fig);
    ov.apply(spec);
    std::string csv;
    if (fig >= 2) {
      if (shared_csv.empty()) shared_csv = emit_csv(run_experiment(spec));
      csv = shared_csv;
    } else {
      csv = emit_csv(run_experiment(spec));
    }
    const std::string path = out_dir + "/fig" + std::to_string(fig) + ".csv";
    write_file(path, csv);
    std::cout << "wrote " << path << "\n";
  }
  return 0;
}

int cmd_oracle(int sources, int relays, int instances, const SpecOverrides& ov) {
  ExperimentSpec spec;
  spec.seed = default_seed();
  spec.num_sources = sources;
  spec.num_relays = relays;
  spec.sweep_values = {static_cast<double>(relays)};
  ov.apply(spec);

  const std::vector<double> targets(sources, spec.sim.ser_target);
  int failures = 0;
  for (int i = 0; i < instances; ++i) {
    const Topology topo = generate_topology(spec.seed, i, spec);

    const WeightMatrix glm_w =
        build_weight_matrix(topo, spec.sim.params, Policy::Glm, targets);
    const WeightMatrix mwtp_w =
        build_weight_matrix(topo, spec.sim.params, Policy::Mwtp, targets);

    const auto bn = bottleneck_matching(glm_w);
    const auto bn_ref = oracle::exhaustive_matching(glm_w, oracle::Objective::MinBottleneck);
    const bool bn_ok = bn.bottleneck_value == bn_ref.bottleneck;

    const auto mbm = minimum_bottleneck_matching(glm_w);
    const auto lex_ref = oracle::exhaustive_matching(glm_w, oracle::Objective::LexBottleneck);
    bool mbm_ok = true;
    if (mbm.certified) {
      std::vector<double> got;
      for (int s = 0; s < glm_w.m_real; ++s)
        got.push_back(glm_w.at(s, mbm.matching.pairing[s]));
      std::sort(got.begin(), got.end(), std::greater<>());
      mbm_ok = got == lex_ref.sorted_weights_desc;
    }

    const auto mwm = hungarian_min_weight(mwtp_w);
    const auto sum_ref = oracle::exhaustive_matching(mwtp_w, oracle::Objective::MinSum);
    const bool mwm_ok = mwm.total_weight == sum_ref.total;

    if (!(bn_ok && mbm_ok && mwm_ok)) {
      ++failures;
      std::cout << "instance=" << i << " FAIL bottleneck=" << bn_ok
                << " mbm=" << mbm_ok << " hungarian=" << mwm_ok << "\n";
    }
  }
  std::cout << (failures == 0 ? "PASS" : "FAIL") << " oracle cross-check: "
            << instances - failures << "/" << instances << " instances agree\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lifetime-aware relay selection and power allocation toolkit"};
  app.require_subcommand(1);

  // assign
  std::string topology_path, strategy_name = "GLM-MBM";
  double ser_target = 1e-4;
  bool srs_lowest_first = false;
  CLI::App* assign_cmd =
      app.add_subcommand("assign", "compute an assignment for a topology file");
  assign_cmd->add_option("--topology", topology_path, "topology file")->required();
  assign_cmd->add_option("--strategy", strategy_name,
                         "GLM-BM, GLM-MBM, GLM-SRS, MWTP-MWM or MWTP-SRS");
  assign_cmd->add_option("--ser-target", ser_target, "end-to-end SER bound");
  assign_cmd->add_flag("--srs-lowest-first", srs_lowest_first,
                       "greedy selection takes the lowest priority metric first");

  // simulate
  std::string config_path, out_path;
  int figure = 1;
  SpecOverrides sim_ov;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "run one experiment spec and emit CSV");
  simulate_cmd->add_option("--config", config_path, "key=value experiment file");
  simulate_cmd->add_option("--fig", figure, "built-in sweep preset (1..4)")
      ->check(CLI::Range(1, 4));
  simulate_cmd->add_option("--out", out_path, "output CSV path (default stdout)");
  add_override_options(simulate_cmd, sim_ov);

  // sweep
  std::vector<int> figures;
  std::string out_dir = ".";
  SpecOverrides sweep_ov;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "reproduce the shipped result tables");
  sweep_cmd->add_option("--fig", figures, "figures to reproduce (default all)")
      ->check(CLI::Range(1, 4));
  sweep_cmd->add_option("--out-dir", out_dir, "output directory");
  add_override_options(sweep_cmd, sweep_ov);

  // oracle
  int oracle_sources = 4, oracle_relays = 6, oracle_instances = 50;
  SpecOverrides oracle_ov;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "cross-check solvers against exhaustive search on small instances");
  oracle_cmd->add_option("--sources", oracle_sources, "sources (<= 7)")
      ->check(CLI::Range(1, 7));
  oracle_cmd->add_option("--relays", oracle_relays, "relays (<= 8)")
      ->check(CLI::Range(1, 8));
  oracle_cmd->add_option("--instances", oracle_instances, "random instances");
  add_override_options(oracle_cmd, oracle_ov);

  CLI11_PARSE(app, argc, argv);

  try {
    if (assign_cmd->parsed())
      return cmd_assign(topology_path, strategy_name, ser_target, srs_lowest_first);
    if (simulate_cmd->parsed())
      return cmd_simulate(config_path, figure, sim_ov, out_path);
    if (sweep_cmd->parsed()) return cmd_sweep(figures, sweep_ov, out_dir);
    if (oracle_cmd->parsed())
      return cmd_oracle(oracle_sources, oracle_relays, oracle_instances, oracle_ov);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
