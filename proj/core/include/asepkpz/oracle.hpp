#pragma once

// Brute-force references for small systems. Two independent routes to the
// stationary state of the open ASEP:
//   (1) the master equation: build the full 2^ell generator and solve for its
//       null vector;
//   (2) direct enumeration of the weighted-walk measure and the occupation
//       law it induces.
// Both are deliberately self-contained (they do not call the matrix-product
// or sampling modules) so they can serve as oracles for them.
//
// Occupation configurations tau in {0,1}^ell are encoded as bitmasks with
// bit i-1 holding tau_i.

#include <cstdint>
#include <utility>
#include <vector>

#include "asepkpz/params.hpp"

namespace asepkpz {

struct GeneratorMatrix {
  int ell = 0;
  int dim = 0;  // 2^ell
  // outgoing[s] lists (target, rate) with rate > 0; diagonal entries are
  // implied by the zero-row-sum convention.
  std::vector<std::vector<std::pair<int, double>>> outgoing;

  double total_exit_rate(int state) const;
};

// Full generator for ell <= 14 sites (memory guard).
GeneratorMatrix build_generator(const ModelParams& params);

// Stationary distribution: solves pi^T Q = 0, sum pi = 1 by a dense linear
// solve with one row replaced by the normalization. Requires a unique closed
// communicating class; throws otherwise. Postconditions checked: residual
// below 1e-12 and componentwise nonnegativity (to rounding).
std::vector<double> stationary_solve(const GeneratorMatrix& gen);

// Weighted-walk measure, enumerated. Walks are height paths
// (n_0, ..., n_ell) with n_i in {1, ..., n_max} and steps in {-1, 0, +1};
// each walk carries the weight
//   Omega = r^{n_0} s^{n_ell} prod_i v(n_{i-1}, n_i) prod_i [n_i]_q,
// r = (1-rho_a)/rho_a, s = rho_b/(1-rho_b), v = 2 for a flat step and 1
// for an up/down step. Enumeration guard: ell <= 10, n_max <= 40.
struct WalkTable {
  int ell = 0;
  int n_max = 0;
  double total_weight = 0.0;
  // Walks encoded as n_0 in the low 16 bits, then 2 bits per step
  // (0: down, 1: flat, 2: up). probability is nu = Omega / total_weight.
  std::vector<std::pair<std::uint64_t, double>> walks;  // sorted by key

  static std::uint64_t encode(const std::vector<int>& heights);
  static std::vector<int> decode(std::uint64_t key, int ell);
  // Probability of a walk, 0 if absent.
  double probability(const std::vector<int>& heights) const;
};

struct WalkMeasure {
  WalkTable table;
  // Occupation law induced by the walk measure: P(tau) indexed by bitmask.
  std::vector<double> tau_marginal;
};

WalkMeasure enumerate_walk_measure(const ModelParams& params, int n_max);

}  // namespace asepkpz
