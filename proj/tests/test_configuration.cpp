#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cantorsum/baselines.hpp"
#include "cantorsum/configuration.hpp"
#include "test_support.hpp"

using namespace cantorsum;

namespace {
const HomogeneousIFS kThird = middle_alpha(rat(1, 3));
}

TEST_CASE("config_of_pair is the difference in the normalized frame") {
  CHECK(config_of_pair(rat(0), rat(0), kThird) == rat(0));
  CHECK(config_of_pair(rat(1), rat(0), kThird) == rat(1));
  CHECK(config_of_pair(rat(2, 3), rat(1, 3), kThird) == rat(1, 3));
}

TEST_CASE("renormalize closed form on the middle-third pair") {
  CHECK(renormalize(rat(0), kThird, kThird, 0, 0) == rat(0));
  CHECK(renormalize(rat(0), kThird, kThird, 0, 1) == rat(2));
  CHECK(renormalize(rat(1), kThird, kThird, 1, 0) == rat(1));  // fixed point
}

TEST_CASE("renormalize agrees exactly with the affine-composition oracle") {
  auto r2 = refine(kThird, 2);
  int checked = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rational u = ts::random_rational(42, i, 0, -2, 2);
    int a = static_cast<int>(rng::value(42, i, 1, 0) % 4);
    int ap = static_cast<int>(rng::value(42, i, 2, 0) % 4);
    CHECK(renormalize(u, r2, r2, a, ap) ==
          ts::renormalize_oracle(u, r2, r2, {a}, {ap}));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("renormalize_word composes and matches its closed form") {
  CHECK(renormalize_word(rat(1, 5), kThird, kThird, Word{{1}}, Word{{0}}) ==
        renormalize(rat(1, 5), kThird, kThird, 1, 0));
  // u=0, b="01", b'="00": 0 -> 0 -> -2
  CHECK(renormalize_word(rat(0), kThird, kThird, Word{{0, 1}}, Word{{0, 0}}) ==
        rat(-2));

  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rational u = ts::random_rational(43, i, 0, -2, 2);
    int depth = 1 + static_cast<int>(rng::value(43, i, 1, 0) % 3);
    Word b, bp;
    Rational step = u;
    for (int k = 0; k < depth; ++k) {
      int a = static_cast<int>(rng::value(43, i, 2 + 2 * k, 0) % 2);
      int ap = static_cast<int>(rng::value(43, i, 3 + 2 * k, 0) % 2);
      b.letters.push_back(a);
      bp.letters.push_back(ap);
      step = renormalize(step, kThird, kThird, a, ap);
    }
    Rational closed = renormalize_word(u, kThird, kThird, b, bp);
    CHECK(closed == step);
    CHECK(closed == ts::renormalize_oracle(u, kThird, kThird, b.letters, bp.letters));
  }

  CHECK_THROWS_AS(
      renormalize_word(rat(0), kThird, kThird, Word{{0}}, Word{{0, 1}}),
      std::invalid_argument);
}

TEST_CASE("renormalize expands distances by exactly 1/rho") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rational u1 = ts::random_rational(44, i, 0, -2, 2);
    Rational u2 = ts::random_rational(44, i, 1, -2, 2);
    Rational d1 = abs_rat(renormalize(u1, kThird, kThird, 1, 0) -
                          renormalize(u2, kThird, kThird, 1, 0));
    CHECK(d1 == abs_rat(u1 - u2) / kThird.ratio);
  }
}

TEST_CASE("is_linked uses closed hull overlap") {
  CHECK(is_linked(rat(0), rat(1)));
  CHECK(is_linked(rat(1), rat(1)));  // touching endpoints count
  CHECK(is_linked(rat(-1), rat(1)));
  CHECK_FALSE(is_linked(rat(1001, 1000), rat(1)));
}

TEST_CASE("orbit_frontier prunes unlinked configurations") {
  CHECK(orbit_frontier(rat(5), kThird, kThird, 0).nodes.empty());

  // u = 1 keeps the endpoint orbit (path 1...1 / 0...0, configuration 1)
  for (int depth : {1, 4, 10}) {
    auto res = orbit_frontier(rat(1), kThird, kThird, depth);
    bool found = false;
    for (const auto& node : res.nodes) {
      if (node.u == rat(1)) {
        bool all_ones = true, all_zeros = true;
        for (int a : node.path_a.letters) all_ones &= a == 1;
        for (int a : node.path_b.letters) all_zeros &= a == 0;
        found = all_ones && all_zeros;
      }
    }
    CHECK(found);
  }

  // 1/2 lies in C - C = [-1, 1], so frontiers stay nonempty deep down
  auto half = orbit_frontier(rat(1, 2), kThird, kThird, 30);
  CHECK_FALSE(half.nodes.empty());
  CHECK_FALSE(half.truncated);
}

TEST_CASE("orbit_frontier nodes are linked and reproducible from their paths") {
  auto res = orbit_frontier(rat(1, 3), kThird, kThird, 6);
  const Rational s0 = s0_of(kThird, kThird);
  for (const auto& node : res.nodes) {
    CHECK(is_linked(node.u, s0));
    Rational replayed = rat(1, 3);
    for (std::size_t i = 0; i < node.path_a.letters.size(); ++i)
      replayed = renormalize(replayed, kThird, kThird, node.path_a.letters[i],
                             node.path_b.letters[i]);
    CHECK(replayed == node.u);
  }
}

TEST_CASE("orbit_frontier monotonicity in depth") {
  for (int k = 0; k <= 100; k += 10) {
    Rational u = rat(-100 + 2 * k, 100);
    bool deep = !orbit_frontier(u, kThird, kThird, 12).nodes.empty();
    bool shallow = !orbit_frontier(u, kThird, kThird, 6).nodes.empty();
    if (deep) CHECK(shallow);
  }
}

TEST_CASE("intersect_certify negative and unknown branches") {
  auto far = intersect_certify(rat(5, 2), kThird, kThird, nullptr, 4);
  CHECK(far.kind == IntersectResult::Kind::NotIntersecting);
  CHECK(far.depth == 0);

  auto endpoint = intersect_certify(rat(1), kThird, kThird, nullptr, 8);
  CHECK(endpoint.kind == IntersectResult::Kind::Unknown);
}

TEST_CASE("NotIntersecting is sound against the brute-force cover") {
  for (int k = 0; k < 40; ++k) {
    Rational u = rat(-120 + 6 * k, 100);
    auto res = intersect_certify(u, kThird, kThird, nullptr, 6);
    if (res.kind != IntersectResult::Kind::NotIntersecting) continue;
    auto cover = brute_sumset(kThird, kThird, res.depth, SumMode::Difference);
    CHECK_FALSE(cover.contains(u));
  }
}
