#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cantorsum/density.hpp"
#include "cantorsum/ifs.hpp"
#include "cantorsum/interval_union.hpp"

namespace cantorsum {

enum class Mode { Cross, Self };

struct PartitionChoice {
  std::vector<int> A1, A2;  // disjoint letter subsets, A1 avoids endmost
  long G1 = 0, G2 = 0;      // good pairs with first letter in A1 / A2
  bool by_exhaustive_fallback = false;
};

struct PartitionError {
  std::string what;
  Rational best_fraction_1, best_fraction_2;  // achieved |G^(l)| / |G|
};

// Greedy by good-pair degree with alternation; exhaustive fallback for
// |A| <= 16. Requires |G^(l)| >= |G|/3 for both classes.
std::optional<PartitionChoice> select_partitions(const GoodPairTable& table,
                                                 const HomogeneousIFS& K,
                                                 PartitionError* err = nullptr);

struct SelfPartitionChoice {
  std::vector<int> A1, A2;     // split of Abar, A1 avoids endmost
  std::array<long, 4> Glm{};   // |G^(lm)|, row-major in (l, m)
  long Abar_size = 0;
};

// Requires |G| >= (15/16)|B|. Splits Abar = {a : deg(a) >= (3/4)|A|} into
// halves and checks all four counts against (3/64)|B| (the stronger form;
// the |G| bound is implied).
std::optional<SelfPartitionChoice> select_partitions_selfsum(
    const GoodPairTable& table, const HomogeneousIFS& K, std::string* err = nullptr);

struct WitnessPair {
  Word b, bp;  // depth-2 words; b starts with a letter of A1
  auto operator<=>(const WitnessPair& o) const = default;
};

// Elementary closed interval of L0 with the word pairs whose return windows
// cover all of it.
struct Segment {
  Rational lo, hi;
  std::vector<WitnessPair> witnesses;
  int distinct_first_letters = 0;
};

struct RecurrentCandidate {
  Mode mode = Mode::Cross;
  HomogeneousIFS K, Kp;  // the rho^{1/2}-presentations (equal in self mode)
  std::vector<int> A1, A2;
  Rational c2;
  long N = 0;
  Rational rho;       // ratio^2: scale of the depth-2 return words
  Rational s0;        // K'-hull length in the normalized frame
  IntervalUnion L0;   // candidate recurrent set
  IntervalUnion L1;   // rho-neighborhood
  IntervalUnion L;    // rho/2-neighborhood
  std::vector<Segment> segments;  // partition of L0, sorted
  bool N_exceeds_A1 = false;      // construction was empty by pigeonhole

  bool member_L0(const Rational& t) const;
  const Segment* segment_of(const Rational& t) const;
};

// Sweep-line construction of L0 = {t : |t| < 1 + s0, at least N return
// windows with pairwise-distinct first letters from A1 cover t}. Cross mode
// takes b' over all of A'^2; self mode restricts b' to A2 x A2 and first
// letters per the modified independence.
RecurrentCandidate build_L0(const HomogeneousIFS& K, const HomogeneousIFS& Kp,
                            const std::vector<int>& A1, const std::vector<int>& A2,
                            const Rational& c2, Mode mode);

struct EReport {
  IntervalUnion E;
  Rational threshold;      // c2^2 |A||A'| r
  Rational integral_phi0;  // sum over G^(1) of |J0(a, a')|
  long g1_count = 0, g2_count = 0;
  // phi0 as a step function: maximal intervals of constant positive value
  std::vector<std::pair<Interval, long>> phi0_steps;
};

// E = {phi0 >= threshold} where phi0 sums indicators of
// J0(a1,a1') = union over (a2,a2') in G^(2) of pi(I(a1a2) x I'(a1'a2')).
EReport build_E(const HomogeneousIFS& K, const HomogeneousIFS& Kp,
                const std::vector<int>& A1, const std::vector<int>& A2,
                const Rational& c2);

inline Rational measure(const IntervalUnion& u) { return u.measure(); }

}  // namespace cantorsum
