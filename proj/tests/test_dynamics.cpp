#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "asepkpz/dynamics.hpp"
#include "asepkpz/oracle.hpp"
#include "asepkpz/params.hpp"
#include "asepkpz/rng.hpp"

using namespace asepkpz;

TEST_CASE("total rate of a frozen configuration") {
  // ell = 3, tau = (1, 0, 1), rho = (0.7, 0.3), q = 0.5:
  // right hop 1->2 (rate 1), left hop 2<-3 (rate 0.5),
  // eject left gamma = 0.15, eject right beta = 0.7. Total 2.35.
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 3);
  Simulator sim(p, {1, 0, 1});
  CHECK(sim.total_rate() == doctest::Approx(2.35).epsilon(1e-14));
}

TEST_CASE("step conserves the 0/1 state and advances time") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 5);
  RandomStream rng(11, 0);
  Simulator sim(p, {1, 0, 1, 1, 0});
  double t_prev = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const Event ev = sim.step(rng);
    CHECK(ev.dt > 0.0);
    CHECK(sim.state().t == doctest::Approx(t_prev + ev.dt).epsilon(1e-12));
    t_prev = sim.state().t;
    for (auto occ : sim.state().tau) CHECK(occ <= 1);
    // The incremental rate table must match a from-scratch rebuild.
    Simulator fresh(p, sim.state().tau);
    CHECK(sim.total_rate() == doctest::Approx(fresh.total_rate()).epsilon(1e-12));
  }
}

TEST_CASE("height profile maps occupations to ballot increments") {
  const std::vector<std::uint8_t> tau = {1, 0, 1};
  const auto h = height_profile(tau);
  REQUIRE(h.size() == 4);
  CHECK(h[0] == -4.0);
  CHECK(h[1] == -3.0);
  CHECK(h[2] == -4.0);
  CHECK(h[3] == -3.0);
  // h[ell] = -ell independently of tau.
  const auto h2 = height_profile({0, 0, 1, 1, 0});
  CHECK(h2.back() == -5.0);
  CHECK(height_profile({}).size() == 1);
}

TEST_CASE("absorbing states are reported, not spun on") {
  // No boundary exchange, q = 0, single particle at the right wall: the
  // configuration (0, 1) has no enabled event.
  ModelParams p;
  p.q = 0.0;
  p.ell = 2;
  Simulator sim(p, {0, 1});
  RandomStream rng(1, 0);
  CHECK_THROWS_AS(sim.step(rng), std::runtime_error);
}

TEST_CASE("construction guards") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 3);
  CHECK_THROWS_AS(Simulator(p, {1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(Simulator(p, {1, 0, 2}), std::invalid_argument);
  ModelParams bad = p;
  bad.ell = 0;
  CHECK_THROWS_AS(Simulator(bad, {}), std::invalid_argument);
}

TEST_CASE("same seed reproduces the trajectory") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 4);
  RandomStream rng_a(42, 7), rng_b(42, 7);
  Simulator sim_a(p, {}), sim_b(p, {});
  for (int k = 0; k < 500; ++k) {
    const Event ea = sim_a.step(rng_a);
    const Event eb = sim_b.step(rng_b);
    CHECK(ea.kind == eb.kind);
    CHECK(ea.site == eb.site);
    CHECK(ea.dt == eb.dt);
  }
  CHECK(sim_a.state().tau == sim_b.state().tau);
}

TEST_CASE("single-site chain with all four boundary rates") {
  ModelParams p;
  p.q = 0.3;
  p.alpha = 0.4;
  p.gamma = 0.2;
  p.delta = 0.3;
  p.beta = 0.5;
  p.ell = 1;
  RandomStream rng(5, 0);
  // Occupation fraction converges to (alpha + delta)/(sum of rates) = 0.5.
  auto snaps = sample_stationary_dynamics(p, 20.0, 20000, 0.5, rng);
  REQUIRE(snaps.size() == 20000);
  double occ = 0.0;
  for (const auto& s : snaps) occ += s[0];
  occ /= snaps.size();
  CHECK(occ == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("long-run state distribution approaches the master-equation law") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 2);
  const auto pi = stationary_solve(build_generator(p));
  RandomStream rng(123, 0);
  const auto snaps = sample_stationary_dynamics(p, 50.0, 20000, 5.0, rng);
  std::vector<double> freq(4, 0.0);
  for (const auto& s : snaps) {
    const int mask = s[0] | (s[1] << 1);
    freq[mask] += 1.0;
  }
  double tv = 0.0;
  for (int m = 0; m < 4; ++m) tv += std::abs(freq[m] / snaps.size() - pi[m]);
  CHECK(tv * 0.5 < 0.1);
}

TEST_CASE("snapshot schedule honors burn-in and thinning") {
  const ModelParams p = from_densities(0.7, 0.3, 0.5, 3);
  RandomStream rng(9, 0);
  const auto snaps = sample_stationary_dynamics(p, 1.0, 7, 0.25, rng, {1, 1, 1});
  CHECK(snaps.size() == 7);
  RandomStream rng2(9, 0);
  CHECK_THROWS_AS(sample_stationary_dynamics(p, -1.0, 5, 0.25, rng2),
                  std::invalid_argument);
}
