#pragma once

#include <optional>
#include <vector>

#include "cantorsum/ifs.hpp"
#include "cantorsum/interval_union.hpp"

namespace cantorsum {

// Relative configurations are coordinatized in the frame where the K-hull is
// normalized to [0,1]; the K'-hull then has length s0 = hull'/hull and a
// configuration u places K' at [u, u + s0].

inline Rational s0_of(const HomogeneousIFS& K, const HomogeneousIFS& Kp) {
  return Kp.hull / K.hull;
}

// Coordinate of the configuration aligning x in the K-hull with x' in the
// K'-hull: (x - x') scaled into the normalized frame.
inline Rational config_of_pair(const Rational& x, const Rational& xp,
                               const HomogeneousIFS& K) {
  return (x - xp) / K.hull;
}

bool is_linked(const Rational& u, const Rational& s0);

// One renormalization step: u' = (u + e'_{a'} - e_a) / rho, offsets in the
// normalized frame. Requires equal contraction ratios.
Rational renormalize(const Rational& u, const HomogeneousIFS& K,
                     const HomogeneousIFS& Kp, int a, int ap);

// Word version, |b| = |bp|; closed form divides by rho^{|b|}.
Rational renormalize_word(const Rational& u, const HomogeneousIFS& K,
                          const HomogeneousIFS& Kp, const Word& b, const Word& bp);

struct OrbitNode {
  Rational u;
  Word path_a, path_b;  // equal depth
};

struct FrontierResult {
  std::vector<OrbitNode> nodes;  // surviving depth-D nodes, deduplicated
  int depth = 0;
  bool truncated = false;  // frontier cap hit; nodes are a partial result
};

// Breadth-first expansion over all letter pairs, pruning configurations that
// are not linked and deduplicating equal coordinates at equal depth. The kept
// representative of a duplicate class is the lexicographically smallest path.
FrontierResult orbit_frontier(const Rational& u, const HomogeneousIFS& K,
                              const HomogeneousIFS& Kp, int depth,
                              std::size_t cap = 1000000);

struct IntersectResult {
  enum class Kind { Intersecting, NotIntersecting, Unknown };
  Kind kind;
  int depth;  // NotIntersecting: first empty depth; otherwise depth searched
  std::optional<OrbitNode> witness;  // path whose configuration entered L
  bool truncated = false;
};

// certified_L, when given, must be the recurrent set of a replay-checked
// Certificate for (K, Kp). Without it the positive branch is unreachable and
// bounded frontiers report Unknown.
IntersectResult intersect_certify(const Rational& u, const HomogeneousIFS& K,
                                  const HomogeneousIFS& Kp,
                                  const IntervalUnion* certified_L, int depth,
                                  std::size_t cap = 1000000);

}  // namespace cantorsum
