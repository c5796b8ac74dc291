#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cantorsum/density.hpp"
#include "test_support.hpp"

using namespace cantorsum;

namespace {
const HomogeneousIFS kThird = middle_alpha(rat(1, 3));
const HomogeneousIFS kM04 = middle_alpha(rat(2, 5));
}

TEST_CASE("pushforward histogram at depth 0 is one unit bin") {
  auto h = pushforward_histogram(kThird, kThird, 0);
  REQUIRE(h.masses.size() == 1);
  CHECK(h.total_mass() == rat(1));
}

TEST_CASE("middle-third self-difference at depth 1") {
  auto h = pushforward_histogram(kThird, kThird, 1);
  CHECK(h.bin_width == rat(2, 3));
  REQUIRE(h.masses.size() == 3);
  CHECK(h.masses.at(-1) == rat(1, 4));
  CHECK(h.masses.at(0) == rat(1, 2));
  CHECK(h.masses.at(1) == rat(1, 4));
}

TEST_CASE("histogram mass is conserved and supported in [-s0, 1]") {
  for (const auto& ifs : {kThird, kM04}) {
    for (int n = 0; n <= 6; ++n) {
      auto h = pushforward_histogram(ifs, ifs, n);
      CHECK(h.total_mass() == rat(1));
      for (const auto& [k, m] : h.masses) {
        CHECK(m >= 0);
        Rational lo = Rational(2 * k - 1) * h.bin_width / 2;
        Rational hi = Rational(2 * k + 1) * h.bin_width / 2;
        CHECK(hi > rat(-1));  // support within [-s0, 1] up to bin closure
        CHECK(lo < rat(1));
      }
    }
  }
}

TEST_CASE("l2 estimates: middle-third grows by 9/8, middle-0.4 stays bounded") {
  std::vector<DensityHistogram> third;
  for (int n = 1; n <= 3; ++n) third.push_back(pushforward_histogram(kThird, kThird, n));
  auto rep3 = l2_estimate(third);
  CHECK(rep3.estimates[0].second == rat(9, 16));
  CHECK(rep3.estimates[1].second == rat(81, 128));
  CHECK(rep3.estimates[2].second == rat(729, 1024));
  CHECK(rep3.last_ratio == rat(9, 8));
  CHECK_FALSE(rep3.bounded);  // 9/8 > 1 + 1/10

  std::vector<DensityHistogram> m04;
  for (int n = 1; n <= 4; ++n) m04.push_back(pushforward_histogram(kM04, kM04, n));
  auto rep4 = l2_estimate(m04);
  CHECK(rep4.estimates[0].second == rat(295, 512));
  CHECK(rep4.estimates[1].second == rat(19875, 32768));
  CHECK(rep4.estimates[2].second == rat(2618375, 4194304));
  CHECK(rep4.bounded);
}

TEST_CASE("l2 estimate of a uniform density is exactly 1 and bounded") {
  std::vector<DensityHistogram> hs;
  for (int depth = 1; depth <= 3; ++depth) {
    DensityHistogram h;
    h.depth = depth;
    h.bin_width = rat(1, 4 * depth);
    for (long k = 0; k < 4 * depth; ++k) h.masses[k] = rat(1, 4 * depth);
    hs.push_back(std::move(h));
  }
  auto rep = l2_estimate(hs);
  for (const auto& [d, est] : rep.estimates) CHECK(est == rat(1));
  CHECK(rep.bounded);
}

TEST_CASE("l2 estimate requires at least three depths") {
  std::vector<DensityHistogram> hs{pushforward_histogram(kThird, kThird, 1)};
  CHECK_THROWS_AS(l2_estimate(hs), std::invalid_argument);
}

TEST_CASE("single-letter pair is good for any positive c2") {
  HomogeneousIFS k;
  k.labels = {"0"};
  k.offsets = {rat(0)};
  k.ratio = rat(1, 3);
  k.hull = 1;
  auto t = classify_pairs(k, k, rat(1));
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].neighbors == 0);
  CHECK(t.rows[0].good);
}

TEST_CASE("middle-third pair classification matches the hand enumeration") {
  auto t = classify_pairs(kThird, kThird, rat(1, 4));
  REQUIRE(t.total == 4);
  // centers {0, -2/3, 2/3, 0}: the diagonal pairs see each other, strictly
  // within radius 2/3 only at distance 0
  for (const auto& row : t.rows) {
    long expect = (row.a == row.ap) ? 1 : 0;
    CHECK(row.neighbors == expect);
    CHECK(row.good);
  }
}

TEST_CASE("good-pair lower bound on a bounded-L2 configuration") {
  auto r2 = refine(kM04, 2);
  auto t = classify_pairs(r2, r2, rat(1, 4));
  CHECK(t.total == 16);
  CHECK(t.good_count == 16);
  CHECK(16 * t.good_count >= 15 * t.total);  // |G| >= (15/16) |B|
}

TEST_CASE("classification is invariant under label permutation") {
  auto a = refine(kM04, 2);
  HomogeneousIFS b = a;
  b.labels = {"w", "x", "y", "z"};  // names are irrelevant to the geometry
  auto ta = classify_pairs(a, a, rat(1, 2));
  auto tb = classify_pairs(b, b, rat(1, 2));
  REQUIRE(ta.rows.size() == tb.rows.size());
  for (std::size_t i = 0; i < ta.rows.size(); ++i) {
    CHECK(ta.rows[i].good == tb.rows[i].good);
    CHECK(ta.rows[i].neighbors == tb.rows[i].neighbors);
  }
}

TEST_CASE("bad pairs satisfy the density inequality on 3J") {
  auto r2 = refine(middle_alpha(rat(3, 10)), 2);
  auto t = classify_pairs(r2, r2, rat(1));
  auto h = pushforward_histogram(r2, r2, 1);
  const Rational s0 = 1;
  long bad = 0;
  for (const auto& row : t.rows) {
    if (row.good) continue;
    ++bad;
    Interval j3{row.center - 3 * t.j_length / 2, row.center + 3 * t.j_length / 2};
    Rational lhs = h.mass_in(j3);
    // threshold: (1/3) c2^{-1} c4^{-1} (1+s0)^{-1} |3J| with c2 = 1, c4 = 1
    Rational rhs = rat(1, 3) * (1 / (1 + s0)) * (3 * t.j_length);
    CHECK(lhs >= rhs);
  }
  CHECK(bad == 4);  // the diagonal pairs stack at center 0
}

TEST_CASE("good-pair union is long when most pairs are good") {
  auto r2 = refine(kM04, 2);
  Rational c2 = rat(1, 4);
  auto t = classify_pairs(r2, r2, c2);
  REQUIRE(16 * t.good_count >= 15 * t.total);
  std::vector<Interval> js;
  for (const auto& row : t.rows)
    if (row.good)
      js.push_back({row.center - t.j_length / 2, row.center + t.j_length / 2});
  IntervalUnion ju(std::move(js));
  const Rational s0 = 1;
  CHECK(ju.measure() >= rat(15, 16) * c2 * (1 + s0));
}

TEST_CASE("pair masses equal the dimension power exactly") {
  auto rep = measure_bounds_check(kThird, kThird);
  CHECK(rep.exact);
  CHECK(rep.c4 == rat(1));
  for (const auto& row : rep.rows) {
    CHECK(row.mass == rat(1, 4));
    CHECK(row.mass == row.rho_power);
  }

  HomogeneousIFS single;
  single.labels = {"0"};
  single.offsets = {rat(0)};
  single.ratio = rat(1, 2);
  single.hull = 1;
  auto rep1 = measure_bounds_check(single, single);
  CHECK(rep1.rows.at(0).mass == rat(1));

  auto r2 = refine(kThird, 2);
  auto rep2 = measure_bounds_check(r2, r2);
  for (const auto& row : rep2.rows) CHECK(row.mass == rat(1, 16));
}
