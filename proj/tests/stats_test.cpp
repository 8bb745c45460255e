#include "apixplore/stats.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "apixplore/rng.hpp"
#include "doctest.h"

using namespace apix;

namespace {

// Pair-counting definitions, straight from the textbook.
double brute_u(const std::vector<double>& xs, const std::vector<double>& ys) {
  double u = 0.0;
  for (double x : xs) {
    for (double y : ys) {
      if (x > y) u += 1.0;
      if (x == y) u += 0.5;
    }
  }
  return u;
}

double brute_a(const std::vector<double>& xs, const std::vector<double>& ys) {
  return brute_u(xs, ys) / (static_cast<double>(xs.size()) * ys.size());
}

std::vector<double> fuzz_sample(Rng& rng, std::uint64_t len, std::uint64_t spread) {
  std::vector<double> out;
  for (std::uint64_t i = 0; i < len; ++i) {
    out.push_back(static_cast<double>(rng.below(spread)));
  }
  return out;
}

}  // namespace

TEST_CASE("effect size matches the pair-counting definition at the extremes") {
  CHECK(vargha_delaney_a({1, 2}, {3, 4}) == 0.0);
  CHECK(vargha_delaney_a({3, 4}, {1, 2}) == 1.0);
  CHECK(vargha_delaney_a({5, 5, 5}, {5, 5, 5}) == 0.5);
  CHECK(vargha_delaney_a({1, 2, 3, 4}, {1, 2, 3, 4}) == 0.5);
  CHECK(vargha_delaney_a({0}, {1, 0}) == doctest::Approx(0.25));
}

TEST_CASE("three against three separated gives the textbook exact p") {
  const MannWhitneyResult r = mann_whitney_u({1, 2, 3}, {4, 5, 6});
  CHECK(r.exact);
  CHECK(r.u == 0.0);
  CHECK(r.p == doctest::Approx(0.1).epsilon(1e-12));

  const MannWhitneyResult flipped = mann_whitney_u({4, 5, 6}, {1, 2, 3});
  CHECK(flipped.u == 9.0);
  CHECK(flipped.p == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("statistics agree with brute-force pair counting on fuzzed samples") {
  Rng rng(0x57a75);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> xs = fuzz_sample(rng, 1 + rng.below(8), 7);
    const std::vector<double> ys = fuzz_sample(rng, 1 + rng.below(8), 7);

    const MannWhitneyResult r = mann_whitney_u(xs, ys);
    CHECK(r.u == doctest::Approx(brute_u(xs, ys)).epsilon(1e-12));
    CHECK(r.p >= 0.0);
    CHECK(r.p <= 1.0);

    const double a = vargha_delaney_a(xs, ys);
    CHECK(a == doctest::Approx(brute_a(xs, ys)).epsilon(1e-12));

    // swapping the samples mirrors both statistics
    CHECK(a + vargha_delaney_a(ys, xs) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.p == doctest::Approx(mann_whitney_u(ys, xs).p).epsilon(1e-9));
  }
}

TEST_CASE("exact enumeration stays near the normal approximation") {
  // Tie-free, both sides at least 5: the z approximation with continuity
  // correction tracks the exact tail to within a couple of percent.
  Rng rng(0xca11b);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> pool(40);
    std::iota(pool.begin(), pool.end(), 0.0);
    for (std::size_t j = pool.size(); j > 1; --j) {
      std::swap(pool[j - 1], pool[rng.below(j)]);
    }
    const std::size_t m = 5 + rng.below(16);
    const std::size_t n = 5 + rng.below(16);
    const std::vector<double> xs(pool.begin(), pool.begin() + m);
    const std::vector<double> ys(pool.begin() + m, pool.begin() + m + n);

    const MannWhitneyResult r = mann_whitney_u(xs, ys);
    REQUIRE(r.exact);

    const double mn = static_cast<double>(m * n);
    const double sigma =
        std::sqrt(mn * (static_cast<double>(m + n) + 1.0) / 12.0);
    const double z = std::max(0.0, std::fabs(r.u - mn / 2.0) - 0.5) / sigma;
    const double approx = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    CHECK(std::fabs(r.p - approx) < 0.02);
  }
}

TEST_CASE("the exact path steps aside for ties and large samples") {
  CHECK_FALSE(mann_whitney_u({1, 2, 2}, {2, 3, 4}).exact);

  std::vector<double> big_x(21), big_y(21);
  std::iota(big_x.begin(), big_x.end(), 0.0);
  std::iota(big_y.begin(), big_y.end(), 100.0);
  const MannWhitneyResult big = mann_whitney_u(big_x, big_y);
  CHECK_FALSE(big.exact);
  CHECK(big.p < 1e-6);

  // fully degenerate pools have no evidence to offer
  const MannWhitneyResult flat = mann_whitney_u({3, 3}, {3, 3});
  CHECK_FALSE(flat.exact);
  CHECK(flat.p == 1.0);
}

TEST_CASE("empty samples are rejected") {
  CHECK_THROWS_AS(mann_whitney_u({}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(mann_whitney_u({1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(vargha_delaney_a({}, {1}), std::invalid_argument);
  CHECK_THROWS_AS(vargha_delaney_a({1}, {}), std::invalid_argument);
}
