#pragma once

#include <vector>

namespace relaylife {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Vec2& a, const Vec2& b);

// Reference distance of the power gain; no two nodes may be closer than this.
inline constexpr double kReferenceDistanceM = 1.0;

// Propagation and SER model constants. Everything here is linear; dB/dBm
// inputs are converted at the configuration boundary, never inside the model.
struct SystemParams {
  double eta = 1.0;          // path-loss constant
  double alpha = 3.5;        // path-loss exponent
  double noise_power = 0.0;  // AWGN power at relays and at the BS, watts
  double power_gain = 1.0;   // gain at the 1 m reference distance, linear
  double mod_index = 2.0;    // modulation-dependent constant

  void validate() const;  // throws std::invalid_argument
};

struct Node {
  Vec2 position;        // meters
  double energy = 0.0;  // joules
};

// Network geometry plus per-node battery levels. Invalid topologies are
// rejected outright (validate() throws); distances are never clamped.
struct Topology {
  std::vector<Node> sources;
  std::vector<Node> relays;
  Vec2 bs_position;

  int num_sources() const { return static_cast<int>(sources.size()); }
  int num_relays() const { return static_cast<int>(relays.size()); }
  void validate() const;
};

// Coefficients of the closed-form end-to-end SER of one source-relay pair:
//   ser = a / ps^2 + b / (ps * pr)
struct PairCoefficients {
  double a = 0.0;  // watts^2
  double b = 0.0;  // watts^2
};

// Channel variance of a link of the given length: eta * distance^(-alpha).
double link_variance(double distance_m, const SystemParams& params);

// End-to-end SER coefficients for the (source, relay) pair of a topology.
PairCoefficients ser_coefficients(const Topology& topology, int source_index,
                                  int relay_index, const SystemParams& params);

// Analytic end-to-end SER at the given transmit powers.
double end_to_end_ser(double source_power, double relay_power,
                      const PairCoefficients& coeff);

}  // namespace relaylife
