#include "relaylife/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace relaylife {

namespace {

constexpr char kCsvHeader[] =
    "strategy,sweep_name,sweep_value,mean_lifetime_packets,"
    "mean_energy_per_packet_j,mean_wasted_energy_j,n_topologies,seed";
constexpr char kPrngNote[] =
    "mt19937_64(splitmix64(seed^0x9E3779B97F4A7C15*(topology_index+1)))";
constexpr int kMaxPlacementTries = 100000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::logic_error("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument(std::string("bad number for ") + what + ": '" +
                                std::string(s) + "'");
  return v;
}

std::int64_t parse_int64(std::string_view s, const char* what) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument(std::string("bad integer for ") + what + ": '" +
                                std::string(s) + "'");
  return v;
}

std::uint64_t parse_uint64(std::string_view s, const char* what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument(std::string("bad integer for ") + what + ": '" +
                                std::string(s) + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

const char* sweep_variable_name(SweepVariable v) {
  return v == SweepVariable::RelayCount ? "relay_count" : "update_interval";
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

SystemParams default_system_params() {
  SystemParams p;
  p.eta = 1.0;
  p.alpha = 3.5;
  p.noise_power = dbm_to_watts(-134.0);
  p.power_gain = db_to_linear(-70.0);
  p.mod_index = 2.0;
  return p;
}

SimConfig default_sim_config() {
  SimConfig cfg;
  cfg.params = default_system_params();
  cfg.ser_target = 1e-4;
  cfg.update_interval_packets = 60;
  // 0.25 s per packet at 10 kbps. Calibrated against the reference sweeps:
  // mean lifetimes land in the 2.5e4-packet range and the BM/SRS crossover
  // falls just below an update interval of 1.7e4 packets.
  cfg.packet_bits = 2500.0;
  cfg.data_rate_bps = 10e3;
  cfg.strategy = Strategy{Policy::Glm, Algorithm::MinBottleneck};
  return cfg;
}

void ExperimentSpec::validate() const {
  if (!(area_side_m > 0.0))
    throw std::invalid_argument("experiment: area side must be > 0");
  if (num_sources < 1)
    throw std::invalid_argument("experiment: need at least one source");
  if (num_relays < num_sources)
    throw std::invalid_argument("experiment: need relays >= sources");
  if (!(initial_energy_j > 0.0))
    throw std::invalid_argument("experiment: initial energy must be > 0");
  if (topology_count < 1)
    throw std::invalid_argument("experiment: topology count must be >= 1");
  if (sweep_values.empty())
    throw std::invalid_argument("experiment: sweep values must be non-empty");
  if (strategies.empty())
    throw std::invalid_argument("experiment: strategies must be non-empty");
  for (const Strategy& s : strategies) s.validate();
  for (double v : sweep_values) {
    if (!(v >= 1.0) || v != std::floor(v))
      throw std::invalid_argument("experiment: sweep values must be positive integers");
    if (sweep == SweepVariable::RelayCount && v < num_sources)
      throw std::invalid_argument("experiment: swept relay count below source count");
  }
  if (threads < 0) throw std::invalid_argument("experiment: threads must be >= 0");
  SimConfig check = sim;
  check.validate();
}

Topology generate_topology(std::uint64_t seed, int index,
                           const ExperimentSpec& spec) {
  std::mt19937_64 rng(
      splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(index) + 1))));

  const int total = spec.num_sources + spec.num_relays;
  std::vector<Vec2> placed;
  placed.reserve(total);
  for (int node = 0; node < total; ++node) {
    bool ok = false;
    for (int attempt = 0; attempt < kMaxPlacementTries && !ok; ++attempt) {
      const Vec2 pos{uniform01(rng) * spec.area_side_m,
                     uniform01(rng) * spec.area_side_m};
      ok = distance(pos, spec.bs_position) >= kReferenceDistanceM;
      for (size_t k = 0; ok && k < placed.size(); ++k)
        ok = distance(pos, placed[k]) >= kReferenceDistanceM;
      if (ok) placed.push_back(pos);
    }
    if (!ok)
      throw std::runtime_error(
          "generate_topology: could not place nodes 1 m apart; area too crowded");
  }

  Topology topo;
  topo.bs_position = spec.bs_position;
  topo.sources.reserve(spec.num_sources);
  topo.relays.reserve(spec.num_relays);
  for (int i = 0; i < spec.num_sources; ++i)
    topo.sources.push_back(Node{placed[i], spec.initial_energy_j});
  for (int j = 0; j < spec.num_relays; ++j)
    topo.relays.push_back(Node{placed[spec.num_sources + j], spec.initial_energy_j});
  topo.validate();
  return topo;
}

namespace {

struct CellStats {
  double lifetime_sum = 0.0;
  double energy_sum = 0.0;
  int energy_count = 0;
  double wasted_sum = 0.0;
};

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const int num_values = static_cast<int>(spec.sweep_values.size());
  const int num_strategies = static_cast<int>(spec.strategies.size());
  const int cells = num_values * num_strategies;

  // per topology, per cell: lifetime, avg energy (nan if absent), wasted
  struct RunOutcome {
    double lifetime = 0.0;
    double energy = std::numeric_limits<double>::quiet_NaN();
    double wasted = 0.0;
  };
  std::vector<RunOutcome> outcomes(static_cast<size_t>(spec.topology_count) * cells);

  const auto run_topology = [&](int index) {
    for (int vi = 0; vi < num_values; ++vi) {
      ExperimentSpec local = spec;
      if (spec.sweep == SweepVariable::RelayCount)
        local.num_relays = static_cast<int>(spec.sweep_values[vi]);
      // Topologies depend only on geometry, so an update-interval sweep
      // reuses the same topology at every sweep value.
      const Topology topo = generate_topology(spec.seed, index, local);
      for (int si = 0; si < num_strategies; ++si) {
        SimConfig cfg = spec.sim;
        cfg.strategy = spec.strategies[si];
        if (spec.sweep == SweepVariable::UpdateInterval)
          cfg.update_interval_packets =
              static_cast<std::int64_t>(spec.sweep_values[vi]);
        const LifetimeResult r = run_lifetime(topo, cfg);
        if (r.truncated)
          throw std::runtime_error(
              "run_experiment: packet cap hit; raise max_packets");
        RunOutcome& out =
            outcomes[static_cast<size_t>(index) * cells + vi * num_strategies + si];
        out.lifetime = static_cast<double>(r.lifetime_packets);
        if (r.avg_energy_per_packet) out.energy = *r.avg_energy_per_packet;
        out.wasted = r.wasted_energy;
      }
    }
  };

  const int hardware = static_cast<int>(std::thread::hardware_concurrency());
  const int num_threads =
      std::max(1, std::min(spec.threads > 0 ? spec.threads : std::max(hardware, 1),
                           spec.topology_count));
  if (num_threads == 1) {
    for (int t = 0; t < spec.topology_count; ++t) run_topology(t);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(num_threads);
    for (int w = 0; w < num_threads; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const int t = next.fetch_add(1);
          if (t >= spec.topology_count) return;
          try {
            run_topology(t);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) error = std::current_exception();
            return;
          }
        }
      });
    }
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  // Reduce in topology order so output does not depend on scheduling.
  std::vector<CellStats> stats(cells);
  for (int t = 0; t < spec.topology_count; ++t)
    for (int c = 0; c < cells; ++c) {
      const RunOutcome& out = outcomes[static_cast<size_t>(t) * cells + c];
      CellStats& cell = stats[c];
      cell.lifetime_sum += out.lifetime;
      cell.wasted_sum += out.wasted;
      if (!std::isnan(out.energy)) {
        cell.energy_sum += out.energy;
        ++cell.energy_count;
      }
    }

  std::vector<ResultRow> rows;
  rows.reserve(cells);
  for (int si = 0; si < num_strategies; ++si)
    for (int vi = 0; vi < num_values; ++vi) {
      const CellStats& cell = stats[vi * num_strategies + si];
      ResultRow row;
      row.strategy = spec.strategies[si].name();
      row.sweep_name = sweep_variable_name(spec.sweep);
      row.sweep_value = spec.sweep_values[vi];
      row.mean_lifetime_packets = cell.lifetime_sum / spec.topology_count;
      row.mean_energy_per_packet_j =
          cell.energy_count > 0
              ? cell.energy_sum / cell.energy_count
              : std::numeric_limits<double>::quiet_NaN();
      row.mean_wasted_energy_j = cell.wasted_sum / spec.topology_count;
      row.n_topologies = spec.topology_count;
      row.seed = spec.seed;
      rows.push_back(std::move(row));
    }
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.strategy != b.strategy) return a.strategy < b.strategy;
    return a.sweep_value < b.sweep_value;
  });
  return rows;
}

std::string emit_csv(std::span<const ResultRow> rows) {
  std::string out;
  out += "# relaylife results\n";
  out += std::string("# prng=") + kPrngNote + "\n";
  out += kCsvHeader;
  out += '\n';
  for (const ResultRow& r : rows) {
    out += r.strategy;
    out += ',';
    out += r.sweep_name;
    out += ',';
    out += format_double(r.sweep_value);
    out += ',';
    out += format_double(r.mean_lifetime_packets);
    out += ',';
    out += format_double(r.mean_energy_per_packet_j);
    out += ',';
    out += format_double(r.mean_wasted_energy_j);
    out += ',';
    out += std::to_string(r.n_topologies);
    out += ',';
    out += std::to_string(r.seed);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  bool saw_header = false;
  for (std::string_view raw : split(text, '\n')) {
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!saw_header) {
      if (line != kCsvHeader)
        throw std::invalid_argument("csv: unexpected header: '" +
                                    std::string(line) + "'");
      saw_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != 8)
      throw std::invalid_argument("csv: expected 8 fields per row");
    ResultRow r;
    r.strategy = std::string(trim(fields[0]));
    r.sweep_name = std::string(trim(fields[1]));
    r.sweep_value = parse_double(trim(fields[2]), "sweep_value");
    r.mean_lifetime_packets = parse_double(trim(fields[3]), "mean_lifetime_packets");
    r.mean_energy_per_packet_j =
        parse_double(trim(fields[4]), "mean_energy_per_packet_j");
    r.mean_wasted_energy_j = parse_double(trim(fields[5]), "mean_wasted_energy_j");
    r.n_topologies =
        static_cast<int>(parse_int64(trim(fields[6]), "n_topologies"));
    r.seed = parse_uint64(trim(fields[7]), "seed");
    rows.push_back(std::move(r));
  }
  if (!saw_header) throw std::invalid_argument("csv: missing header row");
  return rows;
}

namespace {

std::vector<double> parse_double_list(std::string_view value, const char* what) {
  std::vector<double> out;
  for (std::string_view item : split(value, ','))
    out.push_back(parse_double(trim(item), what));
  return out;
}

}  // namespace

ExperimentSpec parse_config(std::string_view text) {
  ExperimentSpec spec;
  spec.seed = default_seed();
  spec.sweep_values = {static_cast<double>(spec.num_relays)};
  for (std::string_view raw : split(text, '\n')) {
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config: expected key=value, got '" +
                                  std::string(line) + "'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "area_side") {
      spec.area_side_m = parse_double(value, "area_side");
    } else if (key == "bs_x") {
      spec.bs_position.x = parse_double(value, "bs_x");
    } else if (key == "bs_y") {
      spec.bs_position.y = parse_double(value, "bs_y");
    } else if (key == "sources") {
      spec.num_sources = static_cast<int>(parse_int64(value, "sources"));
    } else if (key == "relays") {
      spec.num_relays = static_cast<int>(parse_int64(value, "relays"));
    } else if (key == "initial_energy_j") {
      spec.initial_energy_j = parse_double(value, "initial_energy_j");
    } else if (key == "topologies") {
      spec.topology_count = static_cast<int>(parse_int64(value, "topologies"));
    } else if (key == "seed") {
      spec.seed = parse_uint64(value, "seed");
    } else if (key == "sweep") {
      if (value == "relay_count")
        spec.sweep = SweepVariable::RelayCount;
      else if (value == "update_interval")
        spec.sweep = SweepVariable::UpdateInterval;
      else
        throw std::invalid_argument(
            "config: sweep must be relay_count or update_interval");
    } else if (key == "sweep_values") {
      spec.sweep_values = parse_double_list(value, "sweep_values");
    } else if (key == "strategies") {
      spec.strategies.clear();
      for (std::string_view item : split(value, ','))
        spec.strategies.push_back(Strategy::parse(std::string(trim(item))));
    } else if (key == "ser_target") {
      spec.sim.ser_target = parse_double(value, "ser_target");
    } else if (key == "update_interval") {
      spec.sim.update_interval_packets = parse_int64(value, "update_interval");
    } else if (key == "packet_bits") {
      spec.sim.packet_bits = parse_double(value, "packet_bits");
    } else if (key == "data_rate_bps") {
      spec.sim.data_rate_bps = parse_double(value, "data_rate_bps");
    } else if (key == "power_gain_db") {
      spec.sim.params.power_gain = db_to_linear(parse_double(value, "power_gain_db"));
    } else if (key == "noise_dbm") {
      spec.sim.params.noise_power = dbm_to_watts(parse_double(value, "noise_dbm"));
    } else if (key == "path_loss_exponent") {
      spec.sim.params.alpha = parse_double(value, "path_loss_exponent");
    } else if (key == "path_loss_constant") {
      spec.sim.params.eta = parse_double(value, "path_loss_constant");
    } else if (key == "mod_index") {
      spec.sim.params.mod_index = parse_double(value, "mod_index");
    } else if (key == "max_packets") {
      spec.sim.max_packets = parse_int64(value, "max_packets");
    } else if (key == "srs_order") {
      if (value == "highest")
        spec.sim.srs_order = SrsOrder::HighestFirst;
      else if (value == "lowest")
        spec.sim.srs_order = SrsOrder::LowestFirst;
      else
        throw std::invalid_argument("config: srs_order must be highest or lowest");
    } else if (key == "threads") {
      spec.threads = static_cast<int>(parse_int64(value, "threads"));
    } else {
      throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
    }
  }
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ExperimentSpec figure_spec(int figure) {
  ExperimentSpec spec;
  spec.seed = default_seed();
  switch (figure) {
    case 1:
      spec.sweep = SweepVariable::RelayCount;
      spec.sweep_values = {10, 15, 20, 25, 30};
      break;
    case 2:
    case 3:
    case 4:
      spec.sweep = SweepVariable::UpdateInterval;
      spec.sweep_values = {60, 300, 1000, 3000, 10000, 17000, 30000};
      spec.num_relays = 20;
      break;
    default:
      throw std::invalid_argument("figure_spec: figure must be 1..4");
  }
  return spec;
}

Topology parse_topology(std::string_view text) {
  Topology topo;
  bool saw_bs = false;
  for (std::string_view raw : split(text, '\n')) {
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream in{std::string(line)};
    std::string kind;
    double x = 0.0, y = 0.0, energy = 0.0;
    if (!(in >> kind >> x >> y >> energy))
      throw std::invalid_argument(
          "topology file: expected 'kind x_m y_m energy_j' per line, got '" +
          std::string(line) + "'");
    if (kind == "x") {
      topo.sources.push_back(Node{{x, y}, energy});
    } else if (kind == "r") {
      topo.relays.push_back(Node{{x, y}, energy});
    } else if (kind == "bs") {
      if (saw_bs)
        throw std::invalid_argument("topology file: more than one bs line");
      topo.bs_position = {x, y};
      saw_bs = true;
    } else {
      throw std::invalid_argument("topology file: unknown kind '" + kind + "'");
    }
  }
  if (!saw_bs) throw std::invalid_argument("topology file: missing bs line");
  topo.validate();
  return topo;
}

Topology load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open topology file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_topology(buffer.str());
}

std::uint64_t default_seed() {
  const char* env = std::getenv("RELAYLIFE_SEED");
  if (env == nullptr || *env == '\0') return 1;
  return parse_uint64(env, "RELAYLIFE_SEED");
}

}  // namespace relaylife
