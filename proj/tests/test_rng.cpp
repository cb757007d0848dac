#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "asepkpz/numerics.hpp"
#include "asepkpz/rng.hpp"

using namespace asepkpz;

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool same_ab = true, same_ac = true, same_ad = true;
  std::uint64_t first_a = 0;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t xa = a.next_u64();
    if (i == 0) first_a = xa;
    same_ab &= (xa == b.next_u64());
    same_ac &= (xa == c.next_u64());
    same_ad &= (xa == d.next_u64());
  }
  CHECK(same_ab);
  CHECK_FALSE(same_ac);
  CHECK_FALSE(same_ad);
  RandomStream a2(42, 7);
  CHECK(a2.next_u64() == first_a);
}

TEST_CASE("substreams are deterministic and independent of draw order") {
  RandomStream parent(99, 0);
  RandomStream s1 = parent.substream(5);
  parent.next_u64();  // consuming the parent must not change substreams
  RandomStream s2 = parent.substream(5);
  for (int i = 0; i < 8; ++i) CHECK(s1.next_u64() == s2.next_u64());
  RandomStream s3 = parent.substream(6);
  CHECK(parent.substream(5).next_u64() != s3.next_u64());
}

TEST_CASE("uniform01 range and mean") {
  RandomStream rng(1, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform01();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
  }
  // se = 1/sqrt(12 n) ~ 0.00091; allow 5 se.
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("normal moments") {
  RandomStream rng(2, 0);
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s1 += x;
    s2 += x * x;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("exponential mean") {
  RandomStream rng(3, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.exponential();
  CHECK(std::abs(sum / n - 1.0) < 5.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("gamma law: moments and KS against the gamma CDF") {
  for (double shape : {0.5, 1.0, 2.0, 4.7}) {
    RandomStream rng(4, static_cast<std::uint64_t>(shape * 10));
    const int n = 100000;
    double s1 = 0.0, s2 = 0.0;
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) {
      const double x = rng.gamma(shape);
      REQUIRE(x > 0.0);
      draws[i] = x;
      s1 += x;
      s2 += x * x;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    // Mean = shape, Var = shape. 5 sigma bands (kurtosis-correct for var).
    CHECK(std::abs(mean - shape) < 5.0 * std::sqrt(shape / n));
    const double var_of_var = (2.0 + 6.0 / shape) * shape * shape / n;
    CHECK(std::abs(var - shape) < 5.0 * std::sqrt(var_of_var));

    std::vector<double> cdf(n);
    for (int i = 0; i < n; ++i) cdf[i] = gamma_cdf(shape, draws[i]);
    // 0.001-level KS critical value ~ 1.95/sqrt(n).
    CHECK(ks_distance(draws, {}, cdf) < 1.95 / std::sqrt(static_cast<double>(n)));
  }
  CHECK_THROWS_AS(RandomStream(1, 0).gamma(0.0), std::invalid_argument);
}

TEST_CASE("below is in range and roughly uniform") {
  RandomStream rng(5, 0);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t x = rng.below(7);
    REQUIRE(x < 7);
    ++counts[x];
  }
  for (int c : counts) CHECK(std::abs(c - n / 7) < 5 * std::sqrt(n / 7.0));
}
