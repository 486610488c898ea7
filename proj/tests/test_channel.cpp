#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "relaylife/channel.hpp"
#include "test_support.hpp"

using namespace relaylife;
using testsupport::rel_err;
using testsupport::uniform;

namespace {

// Equilateral unit triangle, with the apex nudged up until floating-point
// distances clear the 1 m minimum.
Topology unit_triangle_topology(double energy = 1.0) {
  double apex_y = std::sqrt(3.0) / 2.0;
  while (std::hypot(0.5, apex_y) < 1.0) apex_y = std::nextafter(apex_y, 2.0);
  Topology topo;
  topo.sources = {Node{{0.0, 0.0}, energy}};
  topo.relays = {Node{{1.0, 0.0}, energy}};
  topo.bs_position = {0.5, apex_y};
  topo.validate();
  return topo;
}

SystemParams unit_params() {
  SystemParams p;
  p.eta = 1.0;
  p.alpha = 3.5;
  p.noise_power = 1.0;
  p.power_gain = 1.0;
  p.mod_index = 1.0;
  return p;
}

}  // namespace

TEST_CASE("link variance at reference and inverse-linear distances") {
  SystemParams p = unit_params();
  CHECK(link_variance(1.0, p) == 1.0);
  p.alpha = 1.0;
  CHECK(link_variance(2.0, p) == 0.5);
}

TEST_CASE("link variance at 50 m matches a log-domain evaluation") {
  const SystemParams p = unit_params();
  const double got = link_variance(50.0, p);
  const double log_domain = std::exp(-3.5 * std::log(50.0));
  CHECK(rel_err(got, log_domain) < 1e-12);
  CHECK(rel_err(got, 1.1314e-6) < 1e-4);
}

TEST_CASE("link variance rejects distances below the reference") {
  const SystemParams p = unit_params();
  CHECK_THROWS_AS(link_variance(0.5, p), std::invalid_argument);
  CHECK_THROWS_AS(link_variance(0.999999, p), std::invalid_argument);
}

TEST_CASE("link variance times distance^alpha recovers eta") {
  std::mt19937_64 rng(7001);
  for (int i = 0; i < 200; ++i) {
    SystemParams p = unit_params();
    p.eta = uniform(rng, 0.1, 10.0);
    p.alpha = uniform(rng, 0.5, 5.0);
    const double d = uniform(rng, 1.0, 200.0);
    CHECK(rel_err(link_variance(d, p) * std::pow(d, p.alpha), p.eta) < 1e-12);
  }
}

TEST_CASE("ser coefficients with unit parameters and unit distances") {
  const Topology topo = unit_triangle_topology();
  SystemParams p = unit_params();

  PairCoefficients c = ser_coefficients(topo, 0, 0, p);
  CHECK(rel_err(c.a, 0.75) < 1e-12);
  CHECK(rel_err(c.b, 0.75) < 1e-12);

  p.mod_index = 2.0;  // quadruples the K^2 denominator
  c = ser_coefficients(topo, 0, 0, p);
  CHECK(rel_err(c.a, 0.1875) < 1e-12);
  CHECK(rel_err(c.b, 0.1875) < 1e-12);
}

TEST_CASE("ser coefficients magnitude at the testbed operating point") {
  // 50 m equilateral placement, -134 dBm noise, -70 dB gain, K = 2.
  Topology topo;
  topo.sources = {Node{{0.0, 0.0}, 10.0}};
  topo.relays = {Node{{50.0, 0.0}, 10.0}};
  topo.bs_position = {25.0, 25.0 * std::sqrt(3.0)};
  topo.validate();

  SystemParams p;
  p.eta = 1.0;
  p.alpha = 3.5;
  p.noise_power = std::pow(10.0, -16.4);
  p.power_gain = 1e-7;
  p.mod_index = 2.0;

  const PairCoefficients c = ser_coefficients(topo, 0, 0, p);

  // Independent log-domain route from the test's own distances.
  const double d_sd = std::hypot(25.0, 25.0 * std::sqrt(3.0));
  const double log_a = std::log(3.0) + 2.0 * std::log(p.noise_power) -
                       std::log(4.0) - 2.0 * std::log(p.mod_index) -
                       2.0 * std::log(p.power_gain) +
                       3.5 * (std::log(d_sd) + std::log(50.0));
  CHECK(rel_err(c.a, std::exp(log_a)) < 1e-9);
  CHECK(rel_err(c.a, 2.32e-8) < 1e-2);
  CHECK(rel_err(c.b, 2.32e-8) < 1e-2);
}

TEST_CASE("ser coefficients scale exactly with noise^2 and 1/gain^2") {
  const Topology topo = unit_triangle_topology();
  std::mt19937_64 rng(7002);
  for (int i = 0; i < 50; ++i) {
    SystemParams p = unit_params();
    p.noise_power = uniform(rng, 1e-9, 1.0);
    p.power_gain = uniform(rng, 1e-8, 1.0);
    const PairCoefficients base = ser_coefficients(topo, 0, 0, p);

    SystemParams noisier = p;
    noisier.noise_power = 2.0 * p.noise_power;
    const PairCoefficients up = ser_coefficients(topo, 0, 0, noisier);
    CHECK(up.a == 4.0 * base.a);
    CHECK(up.b == 4.0 * base.b);

    SystemParams stronger = p;
    stronger.power_gain = 2.0 * p.power_gain;
    const PairCoefficients down = ser_coefficients(topo, 0, 0, stronger);
    CHECK(down.a == base.a / 4.0);
    CHECK(down.b == base.b / 4.0);
  }
}

TEST_CASE("end-to-end ser spot values") {
  CHECK(end_to_end_ser(1.0, 1.0, {0.5, 0.5}) == 1.0);
  CHECK(end_to_end_ser(2.0, 2.0, {0.5, 0.5}) == 0.25);
  CHECK(end_to_end_ser(1.0, 0.5, {1.0, 1.0}) == 3.0);
}

TEST_CASE("end-to-end ser rejects non-positive powers") {
  CHECK_THROWS_AS(end_to_end_ser(0.0, 1.0, {1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(end_to_end_ser(1.0, -2.0, {1.0, 1.0}), std::domain_error);
}

TEST_CASE("end-to-end ser decreases in either power") {
  std::mt19937_64 rng(7003);
  for (int i = 0; i < 200; ++i) {
    const PairCoefficients c{testsupport::log_uniform(rng, 1e-9, 1.0),
                             testsupport::log_uniform(rng, 1e-9, 1.0)};
    const double ps = testsupport::log_uniform(rng, 1e-3, 1e3);
    const double pr = testsupport::log_uniform(rng, 1e-3, 1e3);
    const double base = end_to_end_ser(ps, pr, c);
    CHECK(end_to_end_ser(ps * 1.25, pr, c) < base);
    CHECK(end_to_end_ser(ps, pr * 1.25, c) < base);
  }
}

TEST_CASE("topology validation rejects bad inputs") {
  Topology topo = unit_triangle_topology();
  SUBCASE("zero energy") {
    topo.sources[0].energy = 0.0;
    CHECK_THROWS_AS(topo.validate(), std::invalid_argument);
  }
  SUBCASE("fewer relays than sources") {
    topo.sources.push_back(Node{{10.0, 10.0}, 1.0});
    CHECK_THROWS_AS(topo.validate(), std::invalid_argument);
  }
  SUBCASE("nodes too close") {
    topo.relays.push_back(Node{{0.5, 0.0}, 1.0});
    topo.sources.push_back(Node{{20.0, 20.0}, 1.0});  // keep counts legal
    CHECK_THROWS_AS(topo.validate(), std::invalid_argument);
  }
  SUBCASE("node too close to the BS") {
    Topology t;
    t.sources = {Node{{0.0, 0.0}, 1.0}};
    t.relays = {Node{{3.0, 0.0}, 1.0}};
    t.bs_position = {3.5, 0.0};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  }
  SUBCASE("no sources") {
    Topology t;
    t.relays = {Node{{1.0, 0.0}, 1.0}};
    t.bs_position = {5.0, 5.0};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
  }
}

TEST_CASE("system params validation") {
  SystemParams p = unit_params();
  p.alpha = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = unit_params();
  p.noise_power = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
