#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "asepkpz/numerics.hpp"
#include "asepkpz/oracle.hpp"
#include "asepkpz/params.hpp"
#include "asepkpz/rng.hpp"
#include "asepkpz/walks.hpp"

using namespace asepkpz;

TEST_CASE("walk_weight hand values and support") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 1);
  const std::vector<int> flat = {1, 1};
  CHECK(std::exp(walk_weight(p, flat)) == doctest::Approx(18.0 / 49.0).epsilon(1e-13));
  const std::vector<int> jump = {1, 3};
  CHECK(std::isinf(walk_weight(p, jump)));
  const std::vector<int> floor = {0, 1};
  CHECK(std::isinf(walk_weight(p, floor)));
  const std::vector<int> neg = {2, 1, 0};
  CHECK(std::isinf(walk_weight(p, neg)));
}

TEST_CASE("walk_weight matches the enumeration oracle on every walk") {
  const ModelParams p = from_densities(0.8, 0.25, 0.6, 3);
  const WalkMeasure wm = enumerate_walk_measure(p, 6);
  for (const auto& [key, prob] : wm.table.walks) {
    const auto heights = WalkTable::decode(key, 3);
    CHECK(std::exp(walk_weight(p, heights)) ==
          doctest::Approx(prob * wm.table.total_weight).epsilon(1e-12));
  }
}

TEST_CASE("partition table total matches the enumerated total") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 4);
  const PartitionTable table = build_partition_table(p, 8);
  const WalkMeasure wm = enumerate_walk_measure(p, 8);
  CHECK(table.log_z ==
        doctest::Approx(std::log(wm.table.total_weight)).epsilon(1e-12));

  double init_total = 0.0;
  for (int k = 0; k <= table.n_max; ++k) init_total += table.init_prob[k];
  CHECK(init_total == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < table.ell; ++i)
    for (int k = 1; k <= table.n_max; ++k) {
      if (table.log_r_at(i, k) == -std::numeric_limits<double>::infinity()) continue;
      const double* sp = &table.step_prob[(static_cast<std::size_t>(i) * (table.n_max + 1) + k) * 3];
      CHECK(sp[0] + sp[1] + sp[2] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("zero-step table reproduces the boundary overlap") {
  // ell = 0 leaves only the boundary factors: Z_0 = sum_n (rs)^n [n]_q.
  ModelParams p = from_densities(0.7, 0.3, 0.5, 1);
  p.ell = 0;
  const PartitionTable table = build_partition_table(p, 256);
  const double x = (1.0 - p.rho_a) / p.rho_a * p.rho_b / (1.0 - p.rho_b);
  const double closed = (x / (1.0 - x) - p.q * x / (1.0 - p.q * x)) / (1.0 - p.q);
  CHECK(table.log_z == doctest::Approx(std::log(closed)).epsilon(1e-13));
  RandomStream rng(3, 0);
  const auto walk = sample_walk(table, rng);
  CHECK(walk.size() == 1);
  CHECK(walk[0] >= 1);
}

TEST_CASE("sampled log-probability equals weight minus log partition sum") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 6);
  const PartitionTable table = build_partition_table(p, 12);
  RandomStream rng(17, 0);
  for (int k = 0; k < 500; ++k) {
    double lp = 0.0;
    const auto walk = sample_walk(table, rng, &lp);
    const double expected = walk_weight(p, walk) - table.log_z;
    CHECK(std::abs(lp - expected) < 1e-10);
  }
}

TEST_CASE("walk sampler frequencies pass a goodness-of-fit test") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 4);
  const int n_max = 8;
  const PartitionTable table = build_partition_table(p, n_max);
  const WalkMeasure wm = enumerate_walk_measure(p, n_max);

  const int n_samples = 200000;
  RandomStream rng(29, 0);
  std::map<std::uint64_t, int> counts;
  for (int k = 0; k < n_samples; ++k)
    counts[WalkTable::encode(sample_walk(table, rng))] += 1;

  // Cells with expected count >= 5 stand alone; the rest pool into one.
  double chi2 = 0.0;
  int cells = 0;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  int observed_total = 0;
  for (const auto& [key, prob] : wm.table.walks) {
    const double expected = prob * n_samples;
    const auto it = counts.find(key);
    const int observed = it == counts.end() ? 0 : it->second;
    observed_total += observed;
    if (expected >= 5.0) {
      chi2 += (observed - expected) * (observed - expected) / expected;
      ++cells;
    } else {
      pooled_obs += observed;
      pooled_exp += expected;
    }
  }
  // Every sampled walk must exist in the enumeration.
  CHECK(observed_total == n_samples);
  if (pooled_exp > 0.0) {
    chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  REQUIRE(cells >= 2);
  const double p_value = chi_square_sf(chi2, cells - 1);
  CHECK(p_value > 1e-3);
}

TEST_CASE("occupations given a walk") {
  const std::vector<int> updown = {2, 3, 2};
  RandomStream rng(7, 0);
  const auto tau = sample_tau_given_walk(updown, rng);
  REQUIRE(tau.size() == 2);
  CHECK(tau[0] == 1);
  CHECK(tau[1] == 0);

  const std::vector<int> flat = {2, 2};
  double ones = 0.0;
  const int n = 40000;
  for (int k = 0; k < n; ++k) ones += sample_tau_given_walk(flat, rng)[0];
  CHECK(ones / n == doctest::Approx(0.5).epsilon(0.02));

  const std::vector<int> single = {2};
  CHECK_THROWS_AS(sample_tau_given_walk(single, rng), std::invalid_argument);
}

TEST_CASE("joint samples satisfy the per-step height identity exactly") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 6);
  const PartitionTable table = build_partition_table(p, 12);
  RandomStream rng(41, 0);
  double m_end_sum = 0.0;
  const int n_samples = 20000;
  for (int k = 0; k < n_samples; ++k) {
    const JointWalk jw = sample_joint(table, rng);
    REQUIRE(jw.n.size() == 7);
    REQUIRE(jw.m.size() == 7);
    REQUIRE(jw.tau.size() == 6);
    CHECK(jw.m[0] == 0);
    int height = 0;
    for (int i = 1; i <= 6; ++i) {
      const int dn = jw.n[i] - jw.n[i - 1];
      const int dm = jw.m[i] - jw.m[i - 1];
      // The coin moves exactly where the walk is flat.
      CHECK(((dn == 0 && (dm == 1 || dm == -1)) || (dn != 0 && dm == 0)));
      // 2 tau - 1 = dn + dm per step, as integers.
      CHECK(2 * static_cast<int>(jw.tau[i - 1]) - 1 == dn + dm);
      height += 2 * static_cast<int>(jw.tau[i - 1]) - 1;
      CHECK(height == (jw.n[i] - jw.n[0]) + jw.m[i]);
    }
    m_end_sum += jw.m[6];
  }
  // The coin walk is unbiased.
  CHECK(std::abs(m_end_sum / n_samples) < 0.05);
}

TEST_CASE("diffusive rescaling on and between lattice points") {
  // epsilon = 1, L = 1 gives ell = 4 and unit lattice spacing in t.
  JointWalk jw;
  jw.n = {1, 2, 2, 1, 1};
  jw.m = {0, 0, 1, 1, 0};
  jw.tau = {1, 1, 0, 0};  // unused by rescaling
  const double shift = 0.5 * std::log(0.25);

  const RescaledPath on = rescale_joint(jw, 1.0, 1.0, 4);
  REQUIRE(on.x.size() == 5);
  for (int j = 0; j <= 4; ++j) {
    CHECK(on.x[j] == doctest::Approx(0.25 * j).epsilon(1e-15));
    CHECK(on.u[j] == doctest::Approx(0.5 * jw.n[j] + shift).epsilon(1e-14));
    CHECK(on.v[j] == doctest::Approx(0.5 * jw.m[j]).epsilon(1e-14));
  }
  CHECK(on.v[0] == 0.0);

  const RescaledPath mid = rescale_joint(jw, 1.0, 1.0, 8);
  // x = 1/8 sits halfway along the first lattice step.
  CHECK(mid.u[1] == doctest::Approx(0.5 * 1.5 + shift).epsilon(1e-14));
  CHECK(mid.v[1] == doctest::Approx(0.0).epsilon(1e-15));
  // x = 3/8 sits halfway along the second step; m interpolates to 0.5.
  CHECK(mid.v[3] == doctest::Approx(0.25).epsilon(1e-14));

  CHECK_THROWS_AS(rescale_joint(jw, 0.5, 1.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(rescale_joint(jw, 1.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("partition table guards") {
  CHECK_THROWS_AS(build_partition_table(from_rates(0.5, 0.5, 0.1, 0.1, 0.5), 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_partition_table(from_densities(0.3, 0.7, 0.5), 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_partition_table(from_densities(0.7, 0.3, 0.5), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_partition_table(from_densities(0.7, 0.3, 0.5, 200000), 1000),
                  std::invalid_argument);
}
