#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "relaylife/assignment.hpp"
#include "relaylife/oracle.hpp"
#include "test_support.hpp"

using namespace relaylife;
using testsupport::random_topology;
using testsupport::rel_err;

namespace {

SystemParams testbed_params() { return default_system_params(); }

std::vector<double> common_targets(int num_sources, double p = 1e-4) {
  return std::vector<double>(num_sources, p);
}

double max_pair_weight(const Assignment& a) {
  double m = 0.0;
  for (const AssignedPair& p : a.pairs) m = std::max(m, p.weight);
  return m;
}

double sum_pair_weight(const Assignment& a) {
  double s = 0.0;
  for (const AssignedPair& p : a.pairs) s += p.weight;
  return s;
}

}  // namespace

TEST_CASE("strategy names, parsing and the valid combinations") {
  for (const Strategy& s : Strategy::all()) {
    CHECK_NOTHROW(s.validate());
    CHECK(Strategy::parse(s.name()).name() == s.name());
  }
  CHECK(Strategy{Policy::Glm, Algorithm::MinBottleneck}.name() == "GLM-MBM");
  CHECK(Strategy{Policy::Mwtp, Algorithm::MinWeightSum}.name() == "MWTP-MWM");
  CHECK_THROWS_AS((Strategy{Policy::Glm, Algorithm::MinWeightSum}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((Strategy{Policy::Mwtp, Algorithm::Bottleneck}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((Strategy{Policy::Mwtp, Algorithm::MinBottleneck}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS(Strategy::parse("GLM-MWM"), std::invalid_argument);
}

TEST_CASE("weight matrix of a single-pair network with engineered unit weight") {
  // Unit distances, noise chosen so a = b = 1/4; with 1 J everywhere and a
  // target of 1/2 the pair weight lands exactly at 1.
  double apex_y = std::sqrt(3.0) / 2.0;
  while (std::hypot(0.5, apex_y) < 1.0) apex_y = std::nextafter(apex_y, 2.0);
  Topology topo;
  topo.sources = {Node{{0.0, 0.0}, 1.0}};
  topo.relays = {Node{{1.0, 0.0}, 1.0}};
  topo.bs_position = {0.5, apex_y};

  SystemParams p;
  p.eta = 1.0;
  p.alpha = 3.5;
  p.noise_power = std::sqrt(1.0 / 3.0);
  p.power_gain = 1.0;
  p.mod_index = 1.0;

  const WeightMatrix w =
      build_weight_matrix(topo, p, Policy::Glm, common_targets(1, 0.5));
  CHECK(w.n == 1);
  CHECK(w.m_real == 1);
  CHECK(rel_err(w.at(0, 0), 1.0) < 1e-12);
}

TEST_CASE("weight matrix pads dummy rows with zeros") {
  const Topology topo = random_topology(42, 0, 1, 2);
  const WeightMatrix w = build_weight_matrix(topo, testbed_params(), Policy::Glm,
                                             common_targets(1));
  CHECK(w.n == 2);
  CHECK(w.m_real == 1);
  CHECK(w.at(1, 0) == 0.0);
  CHECK(w.at(1, 1) == 0.0);
  CHECK(w.at(0, 0) > 0.0);
  CHECK(w.at(0, 1) > 0.0);
}

TEST_CASE("weight matrix entries equal pair weights recomputed in isolation") {
  const Topology topo = random_topology(43, 1, 3, 3);
  const auto targets = common_targets(3);
  for (Policy policy : {Policy::Glm, Policy::Mwtp}) {
    const WeightMatrix w =
        build_weight_matrix(topo, testbed_params(), policy, targets);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const PairContext ctx{
            ser_coefficients(topo, i, j, testbed_params()),
            topo.sources[i].energy, topo.relays[j].energy, targets[i]};
        CHECK(w.at(i, j) == pair_weight(policy, ctx));
      }
  }
}

TEST_CASE("priority metric values") {
  CHECK(priority_metric(1.0, 1.0) == 1.0);
  CHECK(priority_metric(2.0, 0.5) == 1.0);
  // Independent route: 1/(es * d^-3.5) = d^3.5 / es.
  const double direct = priority_metric(10.0, std::pow(50.0, -3.5));
  CHECK(rel_err(direct, std::pow(50.0, 3.5) / 10.0) < 1e-12);
  CHECK(rel_err(direct, 8.84e4) < 1e-3);
  CHECK_THROWS_AS(priority_metric(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("greedy selection walks the fixture in priority order") {
  const WeightMatrix w3 = WeightMatrix::padded(
      std::vector<double>{0.5, 0.9, 0.9, 0.9, 0.2, 0.3, 0.9, 0.3, 0.25}, 3, 3);

  // Priorities (3,2,1): s0 first takes r0, then s1 takes r1, s2 takes r2.
  const std::vector<double> high_first{3.0, 2.0, 1.0};
  CHECK(srs_select(w3, high_first).pairing == std::vector<int>{0, 1, 2});

  // Priorities (1,2,3): s2 first takes r2 (0.25), s1 takes r1, s0 takes r0.
  const std::vector<double> low_first{1.0, 2.0, 3.0};
  CHECK(srs_select(w3, low_first).pairing == std::vector<int>{0, 1, 2});
}

TEST_CASE("greedy selection with one source takes the row minimum") {
  std::mt19937_64 rng(7301);
  const WeightMatrix w = testsupport::random_weight_matrix(rng, 6, 1);
  const Matching m = srs_select(w, std::vector<double>{1.0});
  int best = 0;
  for (int j = 1; j < 6; ++j)
    if (w.at(0, j) < w.at(0, best)) best = j;
  CHECK(m.pairing[0] == best);
}

TEST_CASE("greedy selection order flag flips who picks first") {
  const WeightMatrix w = WeightMatrix::padded(
      std::vector<double>{0.5, 0.6, 0.4, 0.9}, 2, 2);
  const std::vector<double> priorities{2.0, 1.0};
  CHECK(srs_select(w, priorities, SrsOrder::HighestFirst).pairing ==
        std::vector<int>{0, 1});
  CHECK(srs_select(w, priorities, SrsOrder::LowestFirst).pairing ==
        std::vector<int>{1, 0});
}

TEST_CASE("greedy selection breaks ties toward lower indices") {
  const WeightMatrix w = WeightMatrix::padded(
      std::vector<double>{0.5, 0.5, 0.7, 0.6}, 2, 2);
  // Equal priorities: source 0 picks first and takes the lower-index 0.5.
  const Matching m = srs_select(w, std::vector<double>{1.0, 1.0});
  CHECK(m.pairing == std::vector<int>{0, 1});
}

TEST_CASE("assign returns disjoint pairs meeting the ser target") {
  const auto targets = common_targets(4);
  for (int seed = 0; seed < 10; ++seed) {
    const Topology topo = random_topology(100 + seed, seed, 4, 7);
    for (const Strategy& strategy : Strategy::all()) {
      const Assignment a =
          assign(topo, testbed_params(), strategy, targets);
      REQUIRE(a.pairs.size() == 4);
      std::set<int> relays;
      for (const AssignedPair& p : a.pairs) {
        CHECK(p.source == static_cast<int>(&p - a.pairs.data()));
        relays.insert(p.relay);
        const PairCoefficients c =
            ser_coefficients(topo, p.source, p.relay, testbed_params());
        CHECK(rel_err(end_to_end_ser(p.source_power, p.relay_power, c), 1e-4) <
              1e-9);
      }
      CHECK(relays.size() == 4);
    }
  }
}

TEST_CASE("bottleneck and lexicographic strategies share the max weight") {
  const auto targets = common_targets(5);
  for (int seed = 0; seed < 10; ++seed) {
    const Topology topo = random_topology(200 + seed, seed, 5, 8);
    const Assignment bm = assign(topo, testbed_params(),
                                 {Policy::Glm, Algorithm::Bottleneck}, targets);
    const Assignment mbm = assign(topo, testbed_params(),
                                  {Policy::Glm, Algorithm::MinBottleneck}, targets);
    CHECK(max_pair_weight(bm) == max_pair_weight(mbm));
  }
}

TEST_CASE("hungarian strategy equals the exhaustive oracle on 5x5") {
  const auto targets = common_targets(5);
  for (int seed = 0; seed < 10; ++seed) {
    const Topology topo = random_topology(300 + seed, seed, 5, 5);
    const Assignment got = assign(topo, testbed_params(),
                                  {Policy::Mwtp, Algorithm::MinWeightSum}, targets);
    const Assignment ref =
        oracle::oracle_assign(topo, testbed_params(), Policy::Mwtp,
                              oracle::Objective::MinSum, targets);
    CHECK(sum_pair_weight(got) == doctest::Approx(sum_pair_weight(ref)).epsilon(1e-15));
  }
}

TEST_CASE("lexicographic strategy equals the exhaustive oracle on 3x3") {
  const auto targets = common_targets(3);
  for (int seed = 0; seed < 10; ++seed) {
    const Topology topo = random_topology(400 + seed, seed, 3, 3);
    const Assignment got = assign(topo, testbed_params(),
                                  {Policy::Glm, Algorithm::MinBottleneck}, targets);
    const Assignment ref =
        oracle::oracle_assign(topo, testbed_params(), Policy::Glm,
                              oracle::Objective::LexBottleneck, targets);
    std::vector<double> got_w, ref_w;
    for (const AssignedPair& p : got.pairs) got_w.push_back(p.weight);
    for (const AssignedPair& p : ref.pairs) ref_w.push_back(p.weight);
    std::sort(got_w.begin(), got_w.end(), std::greater<>());
    std::sort(ref_w.begin(), ref_w.end(), std::greater<>());
    for (size_t k = 0; k < got_w.size(); ++k)
      CHECK(rel_err(got_w[k], ref_w[k]) < 1e-12);
  }
}

TEST_CASE("first death time implied by a glm assignment is 1/max weight") {
  const auto targets = common_targets(4);
  for (int seed = 0; seed < 10; ++seed) {
    const Topology topo = random_topology(500 + seed, seed, 4, 6);
    for (Algorithm alg : {Algorithm::Bottleneck, Algorithm::MinBottleneck,
                          Algorithm::GreedyPriority}) {
      const Assignment a =
          assign(topo, testbed_params(), {Policy::Glm, alg}, targets);
      double first_death = std::numeric_limits<double>::infinity();
      for (const AssignedPair& p : a.pairs)
        first_death = std::min(
            first_death,
            std::min(topo.sources[p.source].energy / p.source_power,
                     topo.relays[p.relay].energy / p.relay_power));
      CHECK(rel_err(first_death, 1.0 / max_pair_weight(a)) < 1e-9);
    }
  }
}

TEST_CASE("greedy selection is sandwiched by the optimal matchings") {
  const auto targets = common_targets(5);
  for (int seed = 0; seed < 20; ++seed) {
    const Topology topo = random_topology(600 + seed, seed, 5, 9);
    for (Policy policy : {Policy::Glm, Policy::Mwtp}) {
      const WeightMatrix w =
          build_weight_matrix(topo, testbed_params(), policy, targets);
      std::vector<double> priorities(5);
      const PairBasis basis = PairBasis::build(topo, testbed_params());
      for (int i = 0; i < 5; ++i)
        priorities[i] = priority_metric(topo.sources[i].energy,
                                        basis.source_bs_variance[i]);
      const Matching srs = srs_select(w, priorities);
      double srs_sum = 0.0, srs_max = 0.0;
      for (int i = 0; i < w.m_real; ++i) {
        srs_sum += w.at(i, srs.pairing[i]);
        srs_max = std::max(srs_max, w.at(i, srs.pairing[i]));
      }
      CHECK(srs_sum >= hungarian_min_weight(w).total_weight * (1.0 - 1e-12));
      CHECK(srs_max >= bottleneck_matching(w).bottleneck_value);
    }
  }
}

TEST_CASE("assign validates inputs") {
  const Topology topo = random_topology(700, 0, 2, 3);
  CHECK_THROWS_AS(assign(topo, testbed_params(),
                         {Policy::Glm, Algorithm::MinWeightSum},
                         common_targets(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(assign(topo, testbed_params(),
                         {Policy::Glm, Algorithm::Bottleneck}, common_targets(3)),
                  std::invalid_argument);
}
