#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "cantorsum/recurrent.hpp"
#include "test_support.hpp"

using namespace cantorsum;

namespace {

RecurrentCandidate third_candidate() {
  auto r2 = refine(middle_alpha(rat(1, 3)), 2);
  auto table = classify_pairs(r2, r2, rat(1, 2));
  auto parts = select_partitions(table, r2);
  REQUIRE(parts.has_value());
  return build_L0(r2, r2, parts->A1, parts->A2, rat(1, 2), Mode::Cross);
}

RecurrentCandidate acceptance_candidate() {
  auto r2 = refine(middle_alpha(rat(3, 10)), 2);
  auto table = classify_pairs(r2, r2, rat(1));
  auto parts = select_partitions(table, r2);
  REQUIRE(parts.has_value());
  return build_L0(r2, r2, parts->A1, parts->A2, rat(1), Mode::Cross);
}

}  // namespace

TEST_CASE("select_partitions on the refined middle-third set") {
  auto r2 = refine(middle_alpha(rat(1, 3)), 2);
  auto table = classify_pairs(r2, r2, rat(1, 2));
  CHECK(table.good_count == 16);
  auto choice = select_partitions(table, r2);
  REQUIRE(choice.has_value());
  CHECK(3 * choice->G1 >= table.good_count);
  CHECK(3 * choice->G2 >= table.good_count);
  // postcondition replay: disjoint, A1 avoids endmost letters
  std::set<int> a1(choice->A1.begin(), choice->A1.end());
  for (int a : choice->A2) CHECK_FALSE(a1.contains(a));
  for (int a : choice->A1) {
    CHECK(a != 0);
    CHECK(a != r2.size() - 1);
  }
}

TEST_CASE("select_partitions is infeasible on two letters") {
  auto third = middle_alpha(rat(1, 3));
  auto table = classify_pairs(third, third, rat(1, 2));
  PartitionError err;
  CHECK_FALSE(select_partitions(table, third, &err).has_value());
  CHECK_FALSE(err.what.empty());
}

TEST_CASE("self-sum partition split") {
  auto r2 = refine(middle_alpha(rat(1, 3)), 2);
  auto table = classify_pairs(r2, r2, rat(1, 2));
  REQUIRE(16 * table.good_count >= 15 * table.total);
  auto choice = select_partitions_selfsum(table, r2);
  REQUIRE(choice.has_value());
  CHECK(choice->Abar_size >= (3 * r2.size() + 3) / 4);  // |Abar| >= (3/4)|A|
  for (long c : choice->Glm) CHECK(64 * c >= 3 * table.total);
  for (int a : choice->A1) {
    CHECK(a != 0);
    CHECK(a != r2.size() - 1);
  }
}

TEST_CASE("self-sum partitions reject a table with too few good pairs") {
  auto r2 = refine(middle_alpha(rat(3, 10)), 2);
  auto table = classify_pairs(r2, r2, rat(1));  // diagonal pairs are bad
  CHECK(16 * table.good_count < 15 * table.total);
  std::string err;
  CHECK_FALSE(select_partitions_selfsum(table, r2, &err).has_value());
  CHECK(err.find("15/16") != std::string::npos);
}

TEST_CASE("build_L0 sweep equals the pointwise grid oracle") {
  auto check_grid = [](const RecurrentCandidate& cand, const Rational& step) {
    const Rational bound = 1 + cand.s0;
    long mismatches = 0;
    for (Rational t = -bound; t <= bound; t += step) {
      if (cand.member_L0(t) != ts::l0_grid_oracle(t, cand)) ++mismatches;
    }
    CHECK(mismatches == 0);
  };
  // coarse grids here; the acceptance suite runs the rho^2/7 grid
  check_grid(third_candidate(), rat(1, 500));
  check_grid(acceptance_candidate(), rat(1, 701));

  auto demo = ts::demo_cross_result();
  REQUIRE(demo.candidate.has_value());
  check_grid(*demo.candidate, rat(1, 503));
}

TEST_CASE("candidate witnesses are independent returns") {
  for (const RecurrentCandidate& cand :
       {third_candidate(), acceptance_candidate()}) {
    const Rational bound = 1 + cand.s0;
    REQUIRE_FALSE(cand.segments.empty());
    for (const auto& seg : cand.segments) {
      std::set<int> first_letters;
      for (const auto& w : seg.witnesses) first_letters.insert(w.b.letters[0]);
      CHECK(static_cast<long>(first_letters.size()) >= cand.N);
      for (const auto& w : seg.witnesses) {
        // the return stays bounded at both segment endpoints
        CHECK(abs_rat(renormalize_word(seg.lo, cand.K, cand.Kp, w.b, w.bp)) <= bound);
        CHECK(abs_rat(renormalize_word(seg.hi, cand.K, cand.Kp, w.b, w.bp)) <= bound);
        // independence: first letter in A1, second in A2
        CHECK(std::find(cand.A1.begin(), cand.A1.end(), w.b.letters[0]) != cand.A1.end());
        CHECK(std::find(cand.A2.begin(), cand.A2.end(), w.b.letters[1]) != cand.A2.end());
      }
    }
  }
}

TEST_CASE("thickenings nest and stay in the linked ball") {
  auto cand = acceptance_candidate();
  CHECK(cand.L1.contains(cand.L0));
  CHECK(cand.L.contains(cand.L0));
  CHECK(cand.L1.contains(cand.L));
  const Rational outer = 1 + cand.s0 + cand.rho;
  for (const auto& iv : cand.L1.parts()) {
    CHECK(iv.lo >= -outer);
    CHECK(iv.hi <= outer);
  }
  // neighborhood bound on the measure
  CHECK(cand.L1.measure() <=
        cand.L0.measure() + 2 * cand.rho * Rational(static_cast<long>(cand.L0.component_count())));
}

TEST_CASE("N above |A1| empties the construction") {
  auto r2 = refine(middle_alpha(rat(3, 10)), 2);
  // c2 = 2 forces N = ceil(4 * 1.44) = 6 > |A1|
  auto cand = build_L0(r2, r2, {1, 2}, {0, 3}, rat(2), Mode::Cross);
  CHECK(cand.N_exceeds_A1);
  CHECK(cand.L0.empty());
}

TEST_CASE("E is contained in L0 and satisfies the measure chain") {
  auto demo = ts::demo_cross_result();
  REQUIRE(demo.candidate.has_value());
  REQUIRE(demo.e_report.has_value());
  const auto& cand = *demo.candidate;
  const auto& er = *demo.e_report;

  CHECK_FALSE(er.E.empty());
  CHECK(cand.L0.contains(er.E));
  CHECK(cand.L0.measure() >= er.E.measure());

  // |E| >= (1/2) c2 rho^{gamma} (int phi0 - 2 (1+s0) c2^2 rho^{-gamma}),
  // with rho^{-gamma} = |A||A'| r
  Rational power = Rational(cand.K.size()) * Rational(cand.Kp.size()) * cand.K.ratio;
  Rational slack = er.integral_phi0 - 2 * (1 + cand.s0) * er.threshold;
  REQUIRE(slack > 0);
  CHECK(er.E.measure() >= cand.c2 * slack / (2 * power));

  // Fubini for step functions: integrating the exported phi0 steps gives the
  // same value as the per-pair |J0| sum
  Rational step_integral = 0;
  for (const auto& [iv, count] : er.phi0_steps)
    step_integral += Rational(count) * (iv.hi - iv.lo);
  CHECK(step_integral == er.integral_phi0);
  // and E re-derives from the steps
  std::vector<Interval> above;
  for (const auto& [iv, count] : er.phi0_steps)
    if (Rational(count) >= er.threshold) above.push_back(iv);
  CHECK(IntervalUnion(std::move(above)) == er.E);
}

TEST_CASE("E on the acceptance configuration is empty yet contained in L0") {
  auto cand = acceptance_candidate();
  auto er = build_E(cand.K, cand.Kp, cand.A1, cand.A2, cand.c2);
  CHECK(er.E.empty());
  CHECK(cand.L0.contains(er.E));
  CHECK(cand.L0.measure() > 0);
}

TEST_CASE("empty G2 gives an empty E") {
  auto r2 = refine(middle_alpha(rat(1, 3)), 2);
  auto er = build_E(r2, r2, {1, 2}, {}, rat(1, 2));
  CHECK(er.E.empty());
  CHECK(er.integral_phi0 == rat(0));
}

TEST_CASE("interval union measure basics") {
  CHECK(measure(IntervalUnion()) == rat(0));
  IntervalUnion two({{rat(0), rat(1)}, {rat(2), rat(3)}});
  CHECK(measure(two) == rat(2));
  CHECK(two.component_count() == 2);
}
