#include "cantorsum/configuration.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cantorsum {

bool is_linked(const Rational& u, const Rational& s0) {
  return -s0 <= u && u <= 1;
}

Rational renormalize(const Rational& u, const HomogeneousIFS& K,
                     const HomogeneousIFS& Kp, int a, int ap) {
  if (K.ratio != Kp.ratio)
    throw std::invalid_argument("renormalize: presentations must share a ratio");
  return (u + Kp.norm_offset(ap) - K.norm_offset(a)) / K.ratio;
}

Rational renormalize_word(const Rational& u, const HomogeneousIFS& K,
                          const HomogeneousIFS& Kp, const Word& b, const Word& bp) {
  if (b.depth() != bp.depth())
    throw std::invalid_argument("renormalize_word: word length mismatch");
  if (K.ratio != Kp.ratio)
    throw std::invalid_argument("renormalize_word: presentations must share a ratio");
  Rational eb = K.word_offset(b) / K.hull;
  Rational ebp = Kp.word_offset(bp) / Kp.hull * s0_of(K, Kp);
  return (u + ebp - eb) / pow_rat(K.ratio, static_cast<unsigned long>(b.depth()));
}

FrontierResult orbit_frontier(const Rational& u, const HomogeneousIFS& K,
                              const HomogeneousIFS& Kp, int depth,
                              std::size_t cap) {
  if (depth < 0) throw std::invalid_argument("orbit_frontier: depth must be >= 0");
  const Rational s0 = s0_of(K, Kp);
  FrontierResult res;
  if (!is_linked(u, s0)) {
    res.depth = 0;
    return res;
  }
  std::vector<OrbitNode> frontier{OrbitNode{u, {}, {}}};
  for (int d = 0; d < depth; ++d) {
    std::vector<OrbitNode> next;
    std::map<Rational, std::size_t> seen;  // config -> index of first path
    for (const auto& node : frontier) {
      for (int a = 0; a < K.size(); ++a) {
        for (int ap = 0; ap < Kp.size(); ++ap) {
          Rational v = renormalize(node.u, K, Kp, a, ap);
          if (!is_linked(v, s0)) continue;
          auto it = seen.find(v);
          if (it != seen.end()) continue;  // BFS order keeps the lex-min path
          OrbitNode child{std::move(v), node.path_a, node.path_b};
          child.path_a.letters.push_back(a);
          child.path_b.letters.push_back(ap);
          seen.emplace(child.u, next.size());
          next.push_back(std::move(child));
          if (next.size() > cap) {
            res.nodes = std::move(next);
            res.depth = d + 1;
            res.truncated = true;
            return res;
          }
        }
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) {
      res.depth = d + 1;
      return res;
    }
  }
  res.nodes = std::move(frontier);
  res.depth = depth;
  return res;
}

IntersectResult intersect_certify(const Rational& u, const HomogeneousIFS& K,
                                  const HomogeneousIFS& Kp,
                                  const IntervalUnion* certified_L, int depth,
                                  std::size_t cap) {
  const Rational s0 = s0_of(K, Kp);
  IntersectResult res{IntersectResult::Kind::Unknown, depth, std::nullopt, false};
  if (!is_linked(u, s0)) {
    res.kind = IntersectResult::Kind::NotIntersecting;
    res.depth = 0;
    return res;
  }
  if (certified_L && certified_L->contains(u)) {
    res.kind = IntersectResult::Kind::Intersecting;
    res.witness = OrbitNode{u, {}, {}};
    res.depth = 0;
    return res;
  }
  std::vector<OrbitNode> frontier{OrbitNode{u, {}, {}}};
  for (int d = 1; d <= depth; ++d) {
    std::vector<OrbitNode> next;
    std::map<Rational, std::size_t> seen;
    for (const auto& node : frontier) {
      for (int a = 0; a < K.size(); ++a) {
        for (int ap = 0; ap < Kp.size(); ++ap) {
          Rational v = renormalize(node.u, K, Kp, a, ap);
          if (!is_linked(v, s0)) continue;
          if (seen.contains(v)) continue;
          OrbitNode child{std::move(v), node.path_a, node.path_b};
          child.path_a.letters.push_back(a);
          child.path_b.letters.push_back(ap);
          if (certified_L && certified_L->contains(child.u)) {
            res.kind = IntersectResult::Kind::Intersecting;
            res.depth = d;
            res.witness = std::move(child);
            return res;
          }
          seen.emplace(child.u, next.size());
          next.push_back(std::move(child));
          if (next.size() > cap) {
            res.truncated = true;
            res.depth = d;
            return res;  // Unknown, partial
          }
        }
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) {
      res.kind = IntersectResult::Kind::NotIntersecting;
      res.depth = d;
      return res;
    }
  }
  return res;  // Unknown at full depth
}

}  // namespace cantorsum
