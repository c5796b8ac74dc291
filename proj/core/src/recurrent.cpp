#include "cantorsum/recurrent.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cantorsum/configuration.hpp"

namespace cantorsum {

namespace {

bool is_endmost(int a, const HomogeneousIFS& K) {
  return a == 0 || a == K.size() - 1;
}

long degree_sum(const GoodPairTable& table, const std::vector<int>& letters,
                int ap_size) {
  long s = 0;
  for (int a : letters) s += table.degree(a, ap_size);
  return s;
}

}  // namespace

std::optional<PartitionChoice> select_partitions(const GoodPairTable& table,
                                                 const HomogeneousIFS& K,
                                                 PartitionError* err) {
  const int n = K.size();
  const int ap_size = static_cast<int>(table.total / n);
  const long G = table.good_count;

  auto fractions_ok = [&](long g1, long g2) {
    return 3 * g1 >= G && 3 * g2 >= G;
  };

  // Greedy: letters by degree descending, alternate assignment, endmost
  // letters never enter A1.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return table.degree(a, ap_size) > table.degree(b, ap_size);
  });
  PartitionChoice greedy;
  bool turn1 = true;
  for (int a : order) {
    if (turn1 && !is_endmost(a, K)) {
      greedy.A1.push_back(a);
      turn1 = false;
    } else {
      greedy.A2.push_back(a);
      if (!turn1) turn1 = true;
    }
  }
  std::sort(greedy.A1.begin(), greedy.A1.end());
  std::sort(greedy.A2.begin(), greedy.A2.end());
  greedy.G1 = degree_sum(table, greedy.A1, ap_size);
  greedy.G2 = degree_sum(table, greedy.A2, ap_size);
  if (!greedy.A1.empty() && !greedy.A2.empty() &&
      fractions_ok(greedy.G1, greedy.G2))
    return greedy;

  // Exhaustive fallback over A1 subsets of the interior letters; A2 takes
  // everything else. Prefers large A1, then large G1, then lexicographic.
  if (n <= 16) {
    std::vector<int> inner;
    for (int a = 1; a + 1 < n; ++a) inner.push_back(a);
    std::optional<PartitionChoice> best;
    long best_g1 = -1;
    const unsigned long limit = 1UL << inner.size();
    for (unsigned long mask = 1; mask < limit; ++mask) {
      PartitionChoice cand;
      cand.by_exhaustive_fallback = true;
      for (std::size_t i = 0; i < inner.size(); ++i)
        if (mask & (1UL << i)) cand.A1.push_back(inner[i]);
      for (int a = 0; a < n; ++a)
        if (!std::binary_search(cand.A1.begin(), cand.A1.end(), a))
          cand.A2.push_back(a);
      cand.G1 = degree_sum(table, cand.A1, ap_size);
      cand.G2 = degree_sum(table, cand.A2, ap_size);
      if (!fractions_ok(cand.G1, cand.G2)) continue;
      if (!best || cand.A1.size() > best->A1.size() ||
          (cand.A1.size() == best->A1.size() && cand.G1 > best_g1)) {
        best = cand;
        best_g1 = cand.G1;
      }
    }
    if (best) return best;
  }

  if (err) {
    err->what = "no disjoint A1/A2 with |G^(l)| >= |G|/3 and non-endmost A1";
    long div = std::max(G, 1L);
    err->best_fraction_1 = Rational(greedy.G1) / div;
    err->best_fraction_2 = Rational(greedy.G2) / div;
  }
  return std::nullopt;
}

std::optional<SelfPartitionChoice> select_partitions_selfsum(
    const GoodPairTable& table, const HomogeneousIFS& K, std::string* err) {
  const int n = K.size();
  const int ap_size = static_cast<int>(table.total / n);
  if (16 * table.good_count < 15 * table.total) {
    if (err) *err = "precondition |G| >= (15/16)|B| fails";
    return std::nullopt;
  }
  SelfPartitionChoice choice;
  std::vector<int> abar;
  for (int a = 0; a < n; ++a)
    if (4 * table.degree(a, ap_size) >= 3 * n) abar.push_back(a);
  choice.Abar_size = static_cast<long>(abar.size());

  const std::size_t half = abar.size() / 2;
  for (int a : abar) {
    if (choice.A1.size() < half && !is_endmost(a, K))
      choice.A1.push_back(a);
    else
      choice.A2.push_back(a);
  }
  if (choice.A1.empty() || choice.A2.empty()) {
    if (err) *err = "alphabet too small to split Abar";
    return std::nullopt;
  }
  const std::array<const std::vector<int>*, 2> cls{&choice.A1, &choice.A2};
  for (int l = 0; l < 2; ++l)
    for (int m = 0; m < 2; ++m) {
      long c = 0;
      for (int a : *cls[l])
        for (int ap : *cls[m])
          if (table.is_good(a, ap, ap_size)) ++c;
      choice.Glm[static_cast<std::size_t>(2 * l + m)] = c;
    }
  for (long c : choice.Glm)
    if (64 * c < 3 * table.total) {
      if (err) *err = "a class count |G^(lm)| falls below (3/64)|B|";
      return std::nullopt;
    }
  return choice;
}

bool RecurrentCandidate::member_L0(const Rational& t) const {
  const Rational bound = 1 + s0;
  if (!(abs_rat(t) < bound)) return false;
  return L0.contains(t);
}

const Segment* RecurrentCandidate::segment_of(const Rational& t) const {
  auto it = std::upper_bound(
      segments.begin(), segments.end(), t,
      [](const Rational& v, const Segment& s) { return v < s.lo; });
  if (it == segments.begin()) return nullptr;
  --it;
  return t <= it->hi ? &*it : nullptr;
}

RecurrentCandidate build_L0(const HomogeneousIFS& K, const HomogeneousIFS& Kp,
                            const std::vector<int>& A1, const std::vector<int>& A2,
                            const Rational& c2, Mode mode) {
  if (K.ratio != Kp.ratio)
    throw std::invalid_argument("build_L0: presentations must share a ratio");
  if (!(c2 > 0)) throw std::invalid_argument("build_L0: c2 must be positive");
  if (A1.empty() || A2.empty())
    throw std::invalid_argument("build_L0: partitions must be nonempty");

  RecurrentCandidate cand;
  cand.mode = mode;
  cand.K = K;
  cand.Kp = Kp;
  cand.A1 = A1;
  cand.A2 = A2;
  cand.c2 = c2;
  cand.rho = K.ratio * K.ratio;
  cand.s0 = s0_of(K, Kp);
  // N = ceil(c2^2 * rho^{-(d+d'-1)/2}); the power equals |A||A'| r exactly.
  Rational n_val = c2 * c2 * Rational(K.size()) * Rational(Kp.size()) * K.ratio;
  cand.N = static_cast<long>(ceil_int(n_val).get_si());
  if (cand.N < 1) cand.N = 1;
  cand.N_exceeds_A1 = cand.N > static_cast<long>(A1.size());

  const Rational bound = 1 + cand.s0;
  const Rational hw = bound * cand.rho;  // return-window half-width (1+s0) rho

  // |T_b T'_b'(t)| <= 1+s0 holds exactly on [center - hw, center + hw]
  // with center = e_b - e'_b'.
  struct Event {
    Rational x;
    int type;  // 0 = start, 1 = end
    int letter;
    std::size_t widx;
  };
  std::vector<WitnessPair> windows;
  std::vector<Event> events;
  std::vector<std::pair<int, int>> bps;
  if (mode == Mode::Cross) {
    for (int a = 0; a < Kp.size(); ++a)
      for (int b = 0; b < Kp.size(); ++b) bps.emplace_back(a, b);
  } else {
    for (int a : A2)
      for (int b : A2) bps.emplace_back(a, b);
  }
  for (int a1 : A1) {
    for (int a2 : A2) {
      Rational eb = K.norm_offset(a1) + K.ratio * K.norm_offset(a2);
      for (auto [ap1, ap2] : bps) {
        Rational ebp = cand.s0 * (Kp.norm_offset(ap1) + Kp.ratio * Kp.norm_offset(ap2));
        Rational center = eb - ebp;
        if (center + hw < -bound || center - hw > bound) continue;
        std::size_t widx = windows.size();
        windows.push_back({Word{{a1, a2}}, Word{{ap1, ap2}}});
        events.push_back({center - hw, 0, a1, widx});
        events.push_back({center + hw, 1, a1, widx});
      }
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.type != b.type) return a.type < b.type;  // starts before ends
    return a.widx < b.widx;
  });

  std::vector<long> letter_count(static_cast<std::size_t>(K.size()), 0);
  long distinct = 0;
  std::vector<std::size_t> active;  // sorted window indices
  std::vector<Interval> l0_parts;

  auto snapshot = [&]() {
    std::vector<WitnessPair> w;
    w.reserve(active.size());
    for (std::size_t idx : active) w.push_back(windows[idx]);
    return w;
  };

  // Between consecutive event coordinates the active set is constant; every
  // active window spans the whole closed gap, so the emitted closed segment
  // carries witnesses valid at both endpoints.
  std::optional<Rational> prev_coord;
  long distinct_after_prev = 0;
  std::vector<WitnessPair> witnesses_after_prev;

  std::size_t i = 0;
  while (i < events.size()) {
    const Rational x = events[i].x;
    if (prev_coord && distinct_after_prev >= cand.N) {
      Segment seg;
      seg.lo = *prev_coord;
      seg.hi = x;
      seg.distinct_first_letters = static_cast<int>(distinct_after_prev);
      seg.witnesses = witnesses_after_prev;
      cand.segments.push_back(std::move(seg));
      l0_parts.push_back({*prev_coord, x});
    }
    const bool piece_before = prev_coord && distinct_after_prev >= cand.N;
    std::size_t j = i;
    while (j < events.size() && events[j].x == x && events[j].type == 0) {
      const auto& ev = events[j];
      if (letter_count[static_cast<std::size_t>(ev.letter)]++ == 0) ++distinct;
      active.insert(std::lower_bound(active.begin(), active.end(), ev.widx), ev.widx);
      ++j;
    }
    const long point_distinct = distinct;
    auto point_witnesses = active;  // indices; materialized only if needed
    std::size_t k = j;
    while (k < events.size() && events[k].x == x && events[k].type == 1) {
      const auto& ev = events[k];
      if (--letter_count[static_cast<std::size_t>(ev.letter)] == 0) --distinct;
      active.erase(std::lower_bound(active.begin(), active.end(), ev.widx));
      ++k;
    }
    if (point_distinct >= cand.N && !piece_before && distinct < cand.N) {
      // isolated point of L0 at x
      Segment seg;
      seg.lo = x;
      seg.hi = x;
      seg.distinct_first_letters = static_cast<int>(point_distinct);
      seg.witnesses.reserve(point_witnesses.size());
      for (std::size_t idx : point_witnesses) seg.witnesses.push_back(windows[idx]);
      cand.segments.push_back(std::move(seg));
      l0_parts.push_back({x, x});
    }
    prev_coord = x;
    distinct_after_prev = distinct;
    witnesses_after_prev = snapshot();
    i = k;
  }

  // outer constraint |t| < 1 + s0; boundary points resolved by member_L0
  const Rational neg_bound = -bound;
  std::vector<Segment> clipped;
  for (auto& seg : cand.segments) {
    seg.lo = std::max(seg.lo, neg_bound);
    seg.hi = std::min(seg.hi, bound);
    if (seg.lo > seg.hi) continue;
    if (seg.lo == seg.hi && abs_rat(seg.lo) == bound) continue;
    clipped.push_back(std::move(seg));
  }
  cand.segments = std::move(clipped);

  std::vector<Interval> parts;
  for (auto& iv : l0_parts) {
    Rational lo = std::max(iv.lo, neg_bound), hi = std::min(iv.hi, bound);
    if (lo > hi) continue;
    if (lo == hi && abs_rat(lo) == bound) continue;
    parts.push_back({lo, hi});
  }
  cand.L0 = IntervalUnion(std::move(parts));
  cand.L1 = cand.L0.thicken(cand.rho);
  cand.L = cand.L0.thicken(cand.rho / 2);
  return cand;
}

EReport build_E(const HomogeneousIFS& K, const HomogeneousIFS& Kp,
                const std::vector<int>& A1, const std::vector<int>& A2,
                const Rational& c2) {
  if (K.ratio != Kp.ratio)
    throw std::invalid_argument("build_E: presentations must share a ratio");
  GoodPairTable table = classify_pairs(K, Kp, c2);
  const Rational s0 = s0_of(K, Kp);
  const Rational rho = K.ratio * K.ratio;

  EReport rep;
  rep.threshold = c2 * c2 * Rational(K.size()) * Rational(Kp.size()) * K.ratio;

  auto in_class = [](const std::vector<int>& cls, int a) {
    return std::find(cls.begin(), cls.end(), a) != cls.end();
  };
  std::vector<std::pair<int, int>> g1, g2;
  for (const auto& row : table.rows) {
    if (!row.good) continue;
    if (in_class(A1, row.a)) g1.emplace_back(row.a, row.ap);
    if (in_class(A2, row.a)) g2.emplace_back(row.a, row.ap);
  }
  rep.g1_count = static_cast<long>(g1.size());
  rep.g2_count = static_cast<long>(g2.size());

  // phi0 sums pair indicators, so each G^(1) pair contributes its J0 merged.
  struct Event {
    Rational x;
    int type;  // 0 start, 1 end
  };
  std::vector<Event> events;
  rep.integral_phi0 = 0;
  for (auto [a1, ap1] : g1) {
    std::vector<Interval> j0_parts;
    Rational eb1 = K.norm_offset(a1);
    Rational ebp1 = s0 * Kp.norm_offset(ap1);
    for (auto [a2, ap2] : g2) {
      Rational eb = eb1 + K.ratio * K.norm_offset(a2);
      Rational ebp = ebp1 + s0 * Kp.ratio * Kp.norm_offset(ap2);
      // pi(I(b) x I'(b')) = [e_b - e'_b' - rho*s0, e_b - e'_b' + rho]
      j0_parts.push_back({eb - ebp - rho * s0, eb - ebp + rho});
    }
    IntervalUnion j0(std::move(j0_parts));
    rep.integral_phi0 += j0.measure();
    for (const auto& iv : j0.parts()) {
      events.push_back({iv.lo, 0});
      events.push_back({iv.hi, 1});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.x < b.x || (a.x == b.x && a.type < b.type);
  });

  std::vector<Interval> e_parts;
  long count = 0;
  std::optional<Rational> prev_coord;
  long count_after_prev = 0;
  std::size_t i = 0;
  while (i < events.size()) {
    const Rational x = events[i].x;
    if (prev_coord && count_after_prev > 0)
      rep.phi0_steps.push_back({{*prev_coord, x}, count_after_prev});
    if (prev_coord && Rational(count_after_prev) >= rep.threshold)
      e_parts.push_back({*prev_coord, x});
    const bool piece_before =
        prev_coord && Rational(count_after_prev) >= rep.threshold;
    std::size_t j = i;
    while (j < events.size() && events[j].x == x && events[j].type == 0) {
      ++count;
      ++j;
    }
    const long point_count = count;
    std::size_t k = j;
    while (k < events.size() && events[k].x == x && events[k].type == 1) {
      --count;
      ++k;
    }
    if (Rational(point_count) >= rep.threshold && !piece_before &&
        Rational(count) < rep.threshold)
      e_parts.push_back({x, x});
    prev_coord = x;
    count_after_prev = count;
    i = k;
  }
  rep.E = IntervalUnion(std::move(e_parts));
  return rep;
}

}  // namespace cantorsum
