#pragma once

#include <cstdint>
#include <vector>

#include "asepkpz/params.hpp"
#include "asepkpz/rng.hpp"

namespace asepkpz {

// Occupation state of the open exclusion chain. tau[i] is site i+1.
struct Configuration {
  std::vector<std::uint8_t> tau;
  double t = 0.0;  // elapsed simulation time
};

enum class EventKind { RightHop, LeftHop, InjectLeft, EjectLeft, InjectRight, EjectRight };

struct Event {
  EventKind kind;
  int site;   // 0-based left site of a hop, or the boundary site
  double dt;  // holding time that preceded the event
};

// Continuous-time simulator. Rates: right hops at 1, left hops at q,
// boundary exchanges at alpha, gamma (site 1) and delta, beta (site ell).
// Event selection scans a flat rate table; updates after an event touch
// only the entries adjacent to the changed sites.
class Simulator {
 public:
  Simulator(const ModelParams& params, std::vector<std::uint8_t> initial);

  // Draws the holding time and applies one transition. Throws if the state
  // is absorbing (every rate zero).
  Event step(RandomStream& rng);

  const Configuration& state() const { return state_; }
  std::vector<std::uint8_t>& tau() { return state_.tau; }
  double total_rate() const;

 private:
  void rebuild_rates();
  void refresh_bond(int i);     // rate entries for the bond (i, i+1), 0-based
  void refresh_boundary();      // all four boundary entries

  ModelParams params_;
  Configuration state_;
  // Layout: [0, ell-1) right hops, [ell-1, 2ell-2) left hops, then
  // inject-left, eject-left, inject-right, eject-right.
  std::vector<double> rates_;
  int n_bonds_ = 0;
};

// Height function of a configuration: h[0] = -2N where N = sum(tau),
// h[i] - h[i-1] = 2 tau_i - 1. Returns ell+1 values.
std::vector<double> height_profile(const std::vector<std::uint8_t>& tau);

// Runs the simulator for burn_in_time, then records the state every
// thin_time units (thin_time <= 0 picks ell). Returns n_samples snapshots.
std::vector<std::vector<std::uint8_t>> sample_stationary_dynamics(
    const ModelParams& params, double burn_in_time, int n_samples, double thin_time,
    RandomStream& rng, std::vector<std::uint8_t> initial = {});

}  // namespace asepkpz
