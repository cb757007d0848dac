#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "asepkpz/oracle.hpp"
#include "asepkpz/params.hpp"

using namespace asepkpz;

namespace {

// Sorted copy of an outgoing adjacency list for order-independent comparison.
std::vector<std::pair<int, double>> sorted_out(const GeneratorMatrix& gen, int s) {
  auto out = gen.outgoing[s];
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("single-site chain has the closed-form occupation") {
  // Two states, tau = 0 and tau = 1; P(1) = (alpha + delta)/(sum of rates).
  ModelParams p;
  p.q = 0.5;
  p.alpha = 0.3;
  p.gamma = 0.2;
  p.delta = 0.1;
  p.beta = 0.6;
  p.ell = 1;
  const auto pi = stationary_solve(build_generator(p));
  REQUIRE(pi.size() == 2);
  CHECK(pi[1] == doctest::Approx(0.4 / 1.2).epsilon(1e-13));
  CHECK(pi[0] + pi[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("two-site totally asymmetric generator, frozen by hand") {
  // rho = (0.7, 0.3) at q = 0: alpha = beta = 0.7, gamma = delta = 0.
  const ModelParams p = from_densities(0.7, 0.3, 0.0, 2);
  const GeneratorMatrix gen = build_generator(p);
  REQUIRE(gen.dim == 4);
  // Bitmask states: 0 = empty, 1 = site 1 occupied, 2 = site 2, 3 = both.
  using Out = std::vector<std::pair<int, double>>;
  CHECK(sorted_out(gen, 0) == Out{{1, 0.7}});
  CHECK(sorted_out(gen, 1) == Out{{2, 1.0}});
  CHECK(sorted_out(gen, 2) == Out{{0, 0.7}, {3, 0.7}});
  CHECK(sorted_out(gen, 3) == Out{{1, 0.7}});
  CHECK(gen.total_exit_rate(2) == doctest::Approx(1.4).epsilon(1e-15));

  // Balance equations give pi = (5, 7, 5, 5)/22.
  const auto pi = stationary_solve(gen);
  CHECK(pi[0] == doctest::Approx(5.0 / 22.0).epsilon(1e-12));
  CHECK(pi[1] == doctest::Approx(7.0 / 22.0).epsilon(1e-12));
  CHECK(pi[2] == doctest::Approx(5.0 / 22.0).epsilon(1e-12));
  CHECK(pi[3] == doctest::Approx(5.0 / 22.0).epsilon(1e-12));
}

TEST_CASE("stationary_solve accepts transients feeding one closed class") {
  // Pure ejection at both boundaries: everything drains to the empty state.
  ModelParams p;
  p.q = 0.0;
  p.alpha = 0.0;
  p.gamma = 0.5;
  p.delta = 0.0;
  p.beta = 0.5;
  p.ell = 2;
  const auto pi = stationary_solve(build_generator(p));
  CHECK(pi[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(pi[1] == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(pi[2] == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(pi[3] == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("stationary_solve rejects multiple closed classes") {
  // No boundary rates: particle number is conserved, so {00}, {11} and
  // {01, 10} are three separate closed classes.
  ModelParams p;
  p.q = 0.5;
  p.ell = 2;
  CHECK_THROWS_AS(stationary_solve(build_generator(p)), std::invalid_argument);
}

TEST_CASE("generator guards") {
  CHECK_THROWS_AS(build_generator(from_densities(0.7, 0.3, 0.5, 15)),
                  std::invalid_argument);
}

TEST_CASE("walk key encode/decode roundtrip") {
  const std::vector<int> heights = {3, 2, 2, 3, 4};
  CHECK(WalkTable::decode(WalkTable::encode(heights), 4) == heights);
  const std::vector<int> flat = {1, 1};
  CHECK(WalkTable::decode(WalkTable::encode(flat), 1) == flat);
}

TEST_CASE("enumerated walk weights match hand computation") {
  // ell = 1, n_max = 2, rho = (0.7, 0.3), q = 0.5: r = s = 3/7 and the flat
  // walk (1, 1) carries Omega = r s v(1,1) [1]_q [1]_q = 18/49.
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 1);
  const WalkMeasure wm = enumerate_walk_measure(p, 2);
  REQUIRE(wm.table.walks.size() == 4);
  const double omega11 = wm.table.probability({1, 1}) * wm.table.total_weight;
  CHECK(omega11 == doctest::Approx(18.0 / 49.0).epsilon(1e-13));
  // (1, 2): r s^2 * 1 * [1]_q [2]_q = (3/7)(9/49)(1.5).
  const double omega12 = wm.table.probability({1, 2}) * wm.table.total_weight;
  CHECK(omega12 == doctest::Approx((3.0 / 7.0) * (9.0 / 49.0) * 1.5).epsilon(1e-13));
  CHECK(wm.table.probability({1, 3}) == 0.0);
  CHECK(wm.table.probability({0, 1}) == 0.0);
  double total_prob = 0.0;
  for (const auto& [key, prob] : wm.table.walks) {
    (void)key;
    total_prob += prob;
  }
  CHECK(total_prob == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("flat-step halving reduces walk weights to the site-factor product") {
  // Omega / 2^{#flat steps} = r^{n_0} s^{n_ell} prod_i [n_i]_q for every
  // enumerated walk; this is the identity behind the tau-coin construction.
  const ModelParams p = from_densities(0.8, 0.25, 0.6, 3);
  const WalkMeasure wm = enumerate_walk_measure(p, 6);
  const double r = (1.0 - p.rho_a) / p.rho_a;
  const double s = p.rho_b / (1.0 - p.rho_b);
  REQUIRE(!wm.table.walks.empty());
  for (const auto& [key, prob] : wm.table.walks) {
    const auto heights = WalkTable::decode(key, 3);
    int flats = 0;
    double site_product = 1.0;
    for (int i = 0; i <= 3; ++i) site_product *= q_int(heights[i], p.q);
    for (int i = 1; i <= 3; ++i)
      if (heights[i] == heights[i - 1]) ++flats;
    const double omega = prob * wm.table.total_weight;
    const double expected = std::pow(r, heights[0]) * std::pow(s, heights[3]) *
                            site_product * std::pow(2.0, flats);
    CHECK(omega == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("occupation law from walks matches the master equation") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 4);
  const WalkMeasure wm = enumerate_walk_measure(p, 40);
  const auto pi = stationary_solve(build_generator(p));
  REQUIRE(wm.tau_marginal.size() == pi.size());
  double max_diff = 0.0;
  for (std::size_t s = 0; s < pi.size(); ++s)
    max_diff = std::max(max_diff, std::abs(wm.tau_marginal[s] - pi[s]));
  CHECK(max_diff < 1e-10);
  double total = 0.0;
  for (double v : wm.tau_marginal) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("walk enumeration guards") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 4);
  CHECK_THROWS_AS(enumerate_walk_measure(p, 0), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_walk_measure(p, 41), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_walk_measure(from_densities(0.7, 0.3, 0.5, 11), 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(enumerate_walk_measure(from_densities(1.0, 0.3, 0.5, 4), 10),
                  std::invalid_argument);
}
