#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asepkpz/params.hpp"
#include "asepkpz/rng.hpp"

namespace asepkpz {

// Nearest-neighbor path pair. n is the strictly positive weighted walk,
// m the companion coin walk: m moves by +-1 exactly where n is flat, so
// combined (n, m) steps live on a two-dimensional lattice walk. tau holds
// the occupations drawn from the same coins, which makes the height
// increment identity 2 tau_i - 1 = (n_i - n_{i-1}) + (m_i - m_{i-1})
// exact per sample, not just in law.
struct JointWalk {
  std::vector<int> n;
  std::vector<int> m;
  std::vector<std::uint8_t> tau;
};

// Backward partition sums over positive paths with steps in {-1, 0, +1},
// flat steps carrying multiplicity 2. The per-site factor [n]_q and the
// right boundary factor are folded into R so that
//   Z_ell = sum_n r^n R[0][n],   r = (1 - rho_a) / rho_a.
// Rows are stored in log space; sampling uses normalized per-cell step
// probabilities, so a walk draw costs O(ell) with no exp/log calls.
struct PartitionTable {
  ModelParams params;
  int ell = 0;
  int n_max = 0;
  double log_z = 0.0;
  std::vector<double> log_r;      // (ell+1) x (n_max+1); n = 0 is -inf padding
  std::vector<double> init_prob;  // P(n_0 = n), linear, sums to 1
  std::vector<double> step_prob;  // ell x (n_max+1) x 3: (down, flat, up)

  double log_r_at(int i, int n) const {
    return log_r[static_cast<std::size_t>(i) * (n_max + 1) + n];
  }
};

// log of the walk weight: n_0 log r + n_ell log s + sum log v(step)
// + sum log [n_i]_q. Walks leaving {1..} or taking |step| > 1 get -inf.
double walk_weight(const ModelParams& params, std::span<const int> n);

// Builds the table for params.ell steps. n_max = 0 picks the truncation
// automatically from the normalization's convergence. Throws if the table
// total disagrees with the matrix-product normalization beyond 1e-10
// relative; the two are the same sum organized differently, so any gap
// flags a real defect.
PartitionTable build_partition_table(const ModelParams& params, int n_max = 0);

// Exact forward draw from the table's walk law. Optionally reports the
// log-probability of the returned walk under that law.
std::vector<int> sample_walk(const PartitionTable& table, RandomStream& rng,
                             double* log_prob = nullptr);

// Occupations given a walk: up step forces tau = 1, down step tau = 0,
// flat steps toss a fair coin.
std::vector<std::uint8_t> sample_tau_given_walk(std::span<const int> n, RandomStream& rng);

// Walk plus companion coin walk plus the matching occupations.
JointWalk sample_joint(const PartitionTable& table, RandomStream& rng);

// Diffusively rescaled paths on grid_m + 1 uniform points of [0, L]:
//   U(x) = (eps/2) (n_{4 x / eps^2} + log(eps^2/4) / eps)
//   V(x) = (eps/2)  m_{4 x / eps^2}
// with linear interpolation between lattice points. The walk length must
// match round(4 L / eps^2).
struct RescaledPath {
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> v;
};
RescaledPath rescale_joint(const JointWalk& jw, double epsilon, double L, int grid_m);

}  // namespace asepkpz
