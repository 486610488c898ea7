#include "relaylife/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace relaylife {

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void SystemParams::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("system params: eta must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("system params: alpha must be > 0");
  if (!(noise_power > 0.0))
    throw std::invalid_argument("system params: noise power must be > 0");
  if (!(power_gain > 0.0))
    throw std::invalid_argument("system params: power gain must be > 0");
  if (!(mod_index > 0.0))
    throw std::invalid_argument("system params: modulation index must be > 0");
}

namespace {

void check_separation(const Vec2& a, const Vec2& b, const char* what) {
  if (distance(a, b) < kReferenceDistanceM)
    throw std::invalid_argument(std::string("invalid topology: ") + what +
                                " closer than the 1 m reference distance");
}

}  // namespace

void Topology::validate() const {
  if (sources.empty()) throw std::invalid_argument("invalid topology: no sources");
  if (relays.size() < sources.size())
    throw std::invalid_argument(
        "invalid topology: fewer relays than sources");
  for (const Node& s : sources)
    if (!(s.energy > 0.0))
      throw std::invalid_argument("invalid topology: source energy must be > 0");
  for (const Node& r : relays)
    if (!(r.energy > 0.0))
      throw std::invalid_argument("invalid topology: relay energy must be > 0");

  std::vector<const Node*> all;
  all.reserve(sources.size() + relays.size());
  for (const Node& s : sources) all.push_back(&s);
  for (const Node& r : relays) all.push_back(&r);
  for (size_t i = 0; i < all.size(); ++i) {
    check_separation(all[i]->position, bs_position, "node and BS");
    for (size_t j = i + 1; j < all.size(); ++j)
      check_separation(all[i]->position, all[j]->position, "two nodes");
  }
}

double link_variance(double distance_m, const SystemParams& params) {
  if (!(distance_m >= kReferenceDistanceM))
    throw std::invalid_argument(
        "invalid topology: link distance below the 1 m reference distance");
  return params.eta * std::pow(distance_m, -params.alpha);
}

PairCoefficients ser_coefficients(const Topology& topology, int source_index,
                                  int relay_index, const SystemParams& params) {
  if (source_index < 0 || source_index >= topology.num_sources())
    throw std::out_of_range("ser_coefficients: source index");
  if (relay_index < 0 || relay_index >= topology.num_relays())
    throw std::out_of_range("ser_coefficients: relay index");

  const Vec2& src = topology.sources[source_index].position;
  const Vec2& rly = topology.relays[relay_index].position;
  const double var_sd = link_variance(distance(src, topology.bs_position), params);
  const double var_sr = link_variance(distance(src, rly), params);
  const double var_rd = link_variance(distance(rly, topology.bs_position), params);

  const double k2 = params.mod_index * params.mod_index;
  const double g2 = params.power_gain * params.power_gain;
  const double n2 = params.noise_power * params.noise_power;
  const double common = 4.0 * k2 * g2 * var_sd;
  return PairCoefficients{3.0 * n2 / (common * var_sr),
                          3.0 * n2 / (common * var_rd)};
}

double end_to_end_ser(double source_power, double relay_power,
                      const PairCoefficients& coeff) {
  if (!(source_power > 0.0) || !(relay_power > 0.0))
    throw std::domain_error("end_to_end_ser: transmit powers must be > 0");
  return coeff.a / (source_power * source_power) +
         coeff.b / (source_power * relay_power);
}

}  // namespace relaylife
