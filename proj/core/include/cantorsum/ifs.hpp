#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cantorsum/interval_union.hpp"
#include "cantorsum/rational.hpp"

namespace cantorsum {

// A word is a sequence of letter indices into an IFS alphabet.
struct Word {
  std::vector<int> letters;

  int depth() const { return static_cast<int>(letters.size()); }
  bool operator==(const Word& o) const = default;
  auto operator<=>(const Word& o) const = default;
};

// Homogeneous Cantor set: finitely many affine maps with one contraction
// ratio and pairwise disjoint images of the convex hull [0, s].
// Letters are kept sorted by offset, so index 0 is the leftmost cylinder
// and index size()-1 the rightmost.
struct HomogeneousIFS {
  std::vector<std::string> labels;
  std::vector<Rational> offsets;  // left endpoints e_a, ascending
  Rational ratio;                 // common contraction ratio in (0,1)
  Rational hull = 1;              // s; the hull is [0, s]

  int size() const { return static_cast<int>(labels.size()); }
  Rational cylinder_length() const { return ratio * hull; }
  Interval cylinder(int a) const {
    return {offsets[a], offsets[a] + cylinder_length()};
  }
  // e_{a1...an} = e_{a1} + ratio*e_{a2} + ... + ratio^{n-1}*e_{an}
  Rational word_offset(const Word& w) const;
  // Offset in the frame where the hull is normalized to [0,1].
  Rational norm_offset(int a) const { return offsets[a] / hull; }

  // log|A| / log(1/ratio); display only, all decisions use exact identities.
  double dimension() const;

  bool operator==(const HomogeneousIFS& o) const = default;
};

struct ValidationReport {
  struct Violation {
    std::string what;
    std::vector<std::string> labels;  // offending letters, may be empty
  };
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Total: never throws, reports every violated invariant.
ValidationReport validate(const HomogeneousIFS& ifs);

// Middle-alpha set C_a: two letters, ratio a, hull [0,1]. Requires 0 < a < 1/2.
HomogeneousIFS middle_alpha(const Rational& a);

// Depth-n composition presentation: alphabet A^n, ratio rho^n, same set.
// Requires n >= 1 and a valid input.
HomogeneousIFS refine(const HomogeneousIFS& ifs, int n);

// Finds small integers q, p <= cap with ratio1^q == ratio2^p and returns the
// corresponding refinements (equal ratio). nullopt when incommensurable
// within the cap.
std::optional<std::pair<HomogeneousIFS, HomogeneousIFS>> common_ratio(
    const HomogeneousIFS& a, const HomogeneousIFS& b, int cap = 12);

// Shifts offsets of letters in A1 by c0 * ratio * omega(a) * hull. Throws
// std::invalid_argument if A1 touches an endmost letter, omega leaves
// [-1,1], or the result breaks cylinder disjointness (message names the
// offending pair).
HomogeneousIFS perturb(const HomogeneousIFS& ifs, const std::vector<int>& A1,
                       const std::map<int, Rational>& omega, const Rational& c0);

// Max over letters of |t_a| / |I(a)| when the two presentations are
// comparable (equal hull length, alphabet size, labels and cylinder length);
// nullopt otherwise.
std::optional<Rational> closeness(const HomogeneousIFS& a, const HomogeneousIFS& b);

// Tunable constants of the construction. c0 scales the perturbation,
// c2 controls the good-pair threshold and the return count N.
struct ConstantsConfig {
  Rational c0;
  Rational c2;

  // Smallest amplitude for which the perturbation sweep covers the whole
  // candidate set: c0 = 3 + 2*s0.
  static ConstantsConfig defaults(const Rational& s0, Rational c2_value);
  void check(const Rational& s0) const;  // throws on violated invariants
};

}  // namespace cantorsum
