#include "cantorsum/search.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <queue>
#include <set>
#include <thread>

#include "cantorsum/configuration.hpp"
#include "cantorsum/rng.hpp"

namespace cantorsum {

PerturbationVector draw_perturbation(const std::vector<int>& A1,
                                     std::uint64_t seed, std::uint64_t index) {
  PerturbationVector v;
  v.seed = seed;
  v.draw_index = index;
  for (std::size_t c = 0; c < A1.size(); ++c)
    v.omega[A1[c]] = rng::dyadic_component(seed, index, c);
  return v;
}

HomogeneousIFS apply_perturbation(const HomogeneousIFS& K,
                                  const std::vector<int>& A1,
                                  const PerturbationVector& omega,
                                  const Rational& c0) {
  return perturb(K, A1, omega.omega, c0 * K.ratio);
}

bool perturbation_valid(const HomogeneousIFS& K, const std::vector<int>& A1,
                        const PerturbationVector& omega, const Rational& c0) {
  std::vector<Rational> offsets = K.offsets;
  const Rational scale = c0 * K.ratio * K.ratio * K.hull;
  for (int a : A1) {
    if (a <= 0 || a >= K.size() - 1) return false;
    if (auto it = omega.omega.find(a); it != omega.omega.end())
      offsets[a] += scale * it->second;
  }
  const Rational len = K.cylinder_length();
  for (int a = 0; a + 1 < K.size(); ++a)
    if (offsets[a] + len >= offsets[a + 1]) return false;
  return true;
}

namespace {

// Normalized depth-2 offsets of the (optionally perturbed) presentation,
// indexed by a1 * |A| + a2.
std::vector<Rational> depth2_offsets(const HomogeneousIFS& K,
                                     const std::vector<int>* A1,
                                     const PerturbationVector* omega,
                                     const Rational* c0) {
  std::vector<Rational> letter(static_cast<std::size_t>(K.size()));
  for (int a = 0; a < K.size(); ++a) letter[a] = K.norm_offset(a);
  if (A1 && omega && c0) {
    const Rational scale = *c0 * K.ratio * K.ratio;  // normalized frame
    for (int a : *A1) {
      if (auto it = omega->omega.find(a); it != omega->omega.end())
        letter[a] += scale * it->second;
    }
  }
  std::vector<Rational> out;
  out.reserve(letter.size() * letter.size());
  for (int a1 = 0; a1 < K.size(); ++a1)
    for (int a2 = 0; a2 < K.size(); ++a2)
      out.push_back(letter[a1] + K.ratio * letter[a2]);
  return out;
}

struct PerturbedFrame {
  std::vector<Rational> eb;   // K-side depth-2 offsets, normalized
  std::vector<Rational> ebp;  // K'-side, scaled by s0 into the K frame
};

PerturbedFrame make_frame(const RecurrentCandidate& cand,
                          const PerturbationVector& omega, const Rational& c0) {
  PerturbedFrame f;
  f.eb = depth2_offsets(cand.K, &cand.A1, &omega, &c0);
  if (cand.mode == Mode::Self) {
    f.ebp = f.eb;  // same perturbed set on both sides
  } else {
    f.ebp = depth2_offsets(cand.Kp, nullptr, nullptr, nullptr);
    for (auto& e : f.ebp) e *= cand.s0;
  }
  return f;
}

}  // namespace

MembershipResult omega0_member(const Rational& t, const PerturbationVector& omega,
                               const RecurrentCandidate& cand, const Rational& c0) {
  PerturbedFrame frame = make_frame(cand, omega, c0);
  const int np = cand.Kp.size();
  auto image_of = [&](const WitnessPair& w) {
    const Rational& eb = frame.eb[static_cast<std::size_t>(w.b.letters[0]) * cand.K.size() +
                                  w.b.letters[1]];
    const Rational& ebp = frame.ebp[static_cast<std::size_t>(w.bp.letters[0]) * np +
                                    w.bp.letters[1]];
    return Rational((t + ebp - eb) / cand.rho);
  };

  MembershipResult res;
  if (const Segment* seg = cand.segment_of(t)) {
    for (const auto& w : seg->witnesses) {
      Rational img = image_of(w);
      if (cand.member_L0(img)) {
        res.member = true;
        res.witness = w;
        res.image = std::move(img);
        return res;
      }
    }
  }
  for (int a1 = 0; a1 < cand.K.size(); ++a1)
    for (int a2 = 0; a2 < cand.K.size(); ++a2)
      for (int ap1 = 0; ap1 < np; ++ap1)
        for (int ap2 = 0; ap2 < np; ++ap2) {
          WitnessPair w{Word{{a1, a2}}, Word{{ap1, ap2}}};
          Rational img = image_of(w);
          if (cand.member_L0(img)) {
            res.member = true;
            res.witness = std::move(w);
            res.image = std::move(img);
            return res;
          }
        }
  return res;
}

std::vector<Rational> delta_net(const RecurrentCandidate& cand) {
  const Rational step = pow_rat(cand.K.ratio, 5);  // rho^{5/2} exactly
  std::vector<Rational> net;
  for (const auto& iv : cand.L1.parts()) {
    Rational len = iv.hi - iv.lo;
    long steps = static_cast<long>(ceil_int(len / step).get_si());
    for (long k = 0; k <= steps; ++k) {
      Rational t = iv.lo + Rational(k) * step;
      if (t > iv.hi) t = iv.hi;
      if (!net.empty() && net.back() == t) continue;
      net.push_back(std::move(t));
    }
  }
  return net;
}

namespace {

// Coverage of sorted queries by the union over word pairs of rho * L0 + center,
// by a two-pointer sweep; equivalent to omega0_member on every point.
struct DustChecker {
  std::vector<Interval> dust;  // sorted by lo

  DustChecker(const RecurrentCandidate& cand, const PerturbedFrame& frame) {
    dust.reserve(frame.eb.size() * frame.ebp.size() * cand.L0.parts().size());
    for (const auto& eb : frame.eb) {
      for (const auto& ebp : frame.ebp) {
        Rational center = eb - ebp;
        for (const auto& iv : cand.L0.parts())
          dust.push_back({center + cand.rho * iv.lo, center + cand.rho * iv.hi});
      }
    }
    std::sort(dust.begin(), dust.end(), [](const Interval& a, const Interval& b) {
      return a.lo < b.lo;
    });
  }

  // queries must be ascending; returns indices of uncovered queries, stopping
  // after the first miss unless full_scan.
  std::vector<std::uint32_t> misses(const std::vector<Rational>& queries,
                                    bool full_scan) const {
    std::vector<std::uint32_t> out;
    std::size_t d = 0;
    Rational reach = queries.empty() ? Rational(0) : queries.front() - 1;
    bool reach_set = false;
    for (std::uint32_t qi = 0; qi < queries.size(); ++qi) {
      const Rational& t = queries[qi];
      while (d < dust.size() && dust[d].lo <= t) {
        if (!reach_set || dust[d].hi > reach) {
          reach = dust[d].hi;
          reach_set = true;
        }
        ++d;
      }
      if (!reach_set || reach < t) {
        out.push_back(qi);
        if (!full_scan) return out;
      }
    }
    return out;
  }
};

int worker_count(const SearchOptions& opts) {
  if (opts.workers > 0) return opts.workers;
  if (const char* env = std::getenv("CANTORSUM_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

struct DrawRecord {
  bool evaluated = false;
  bool valid = false;
  bool success = false;
  std::vector<std::uint32_t> misses;  // first miss only unless full_scan
};

}  // namespace

SearchResult search_omega(const RecurrentCandidate& cand, long trials,
                          std::uint64_t seed, const Rational& c0,
                          const SearchOptions& opts) {
  SearchResult result;
  result.stats.full_scan = opts.full_scan;
  std::vector<Rational> net = delta_net(cand);
  result.stats.point_attempts.assign(net.size(), 0);
  result.stats.point_failures.assign(net.size(), 0);

  if (net.empty()) {
    // vacuous success: nothing to cover
    PerturbationVector zero;
    zero.seed = seed;
    zero.draw_index = 0;
    for (int a : cand.A1) zero.omega[a] = 0;
    result.omega0 = std::move(zero);
    return result;
  }

  std::vector<DrawRecord> records(static_cast<std::size_t>(trials));
  std::atomic<long> best_success{trials};

  auto evaluate = [&](long i) {
    DrawRecord& rec = records[static_cast<std::size_t>(i)];
    rec.evaluated = true;
    PerturbationVector omega =
        draw_perturbation(cand.A1, seed, static_cast<std::uint64_t>(i));
    rec.valid = perturbation_valid(cand.K, cand.A1, omega, c0);
    if (!rec.valid) return;
    PerturbedFrame frame = make_frame(cand, omega, c0);
    DustChecker checker(cand, frame);
    rec.misses = checker.misses(net, opts.full_scan);
    rec.success = rec.misses.empty();
    if (rec.success) {
      long cur = best_success.load();
      while (i < cur && !best_success.compare_exchange_weak(cur, i)) {
      }
    }
  };

  const int workers = worker_count(opts);
  if (workers <= 1) {
    for (long i = 0; i < trials; ++i) {
      if (i > best_success.load()) break;
      evaluate(i);
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (long i = w; i < trials; i += workers) {
          if (i > best_success.load()) continue;
          evaluate(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  const long accepted = best_success.load();
  const long last = std::min(trials - 1, accepted);
  for (long i = 0; i <= last; ++i) {
    const DrawRecord& rec = records[static_cast<std::size_t>(i)];
    ++result.stats.draws_attempted;
    if (!rec.valid) {
      ++result.stats.invalid_draws;
      continue;
    }
    if (rec.success) {
      for (std::size_t q = 0; q < net.size(); ++q)
        ++result.stats.point_attempts[q];
      continue;
    }
    if (opts.full_scan) {
      for (std::size_t q = 0; q < net.size(); ++q)
        ++result.stats.point_attempts[q];
      for (std::uint32_t q : rec.misses) ++result.stats.point_failures[q];
    } else {
      std::uint32_t first = rec.misses.front();
      for (std::uint32_t q = 0; q <= first; ++q)
        ++result.stats.point_attempts[q];
      ++result.stats.point_failures[first];
    }
  }
  result.stats.misconfigured =
      2 * result.stats.invalid_draws > result.stats.draws_attempted;
  if (accepted < trials)
    result.omega0 =
        draw_perturbation(cand.A1, seed, static_cast<std::uint64_t>(accepted));
  return result;
}

std::variant<Certificate, VerifyFailure> verify_recurrent(
    const RecurrentCandidate& cand, const PerturbationVector& omega0,
    const Rational& c0) {
  if (!perturbation_valid(cand.K, cand.A1, omega0, c0))
    return VerifyFailure{"omega0 does not yield a valid perturbed IFS", {}};

  Certificate cert;
  cert.mode = cand.mode;
  cert.base_K = cand.K;
  cert.base_Kp = cand.Kp;
  cert.perturbed_K = apply_perturbation(cand.K, cand.A1, omega0, c0);
  cert.A1 = cand.A1;
  cert.A2 = cand.A2;
  cert.c0 = c0;
  cert.c2 = cand.c2;
  cert.N = cand.N;
  cert.omega0 = omega0;
  cert.L0 = cand.L0;
  cert.L1 = cand.L1;
  cert.L = cand.L;

  const Rational step = pow_rat(cand.K.ratio, 5);
  const Rational margin = cand.rho / 2;

  if (cand.L.empty()) {
    cert.vacuous = true;
    return cert;
  }

  PerturbedFrame frame = make_frame(cand, omega0, c0);
  std::vector<Rational> net = delta_net(cand);

  // Line sweep assigning each net point the lexicographically smallest word
  // pair whose dust interval covers it; equivalent to per-point enumeration.
  struct DustIv {
    Rational lo, hi;
    std::uint32_t widx;
  };
  const int n = cand.K.size(), np = cand.Kp.size();
  std::vector<DustIv> dust;
  dust.reserve(static_cast<std::size_t>(n) * n * np * np * cand.L0.parts().size());
  for (int a1 = 0; a1 < n; ++a1)
    for (int a2 = 0; a2 < n; ++a2)
      for (int ap1 = 0; ap1 < np; ++ap1)
        for (int ap2 = 0; ap2 < np; ++ap2) {
          std::uint32_t widx = static_cast<std::uint32_t>(
              ((static_cast<std::size_t>(a1) * n + a2) * np + ap1) * np + ap2);
          const Rational& eb = frame.eb[static_cast<std::size_t>(a1) * n + a2];
          const Rational& ebp = frame.ebp[static_cast<std::size_t>(ap1) * np + ap2];
          Rational center = eb - ebp;
          for (const auto& iv : cand.L0.parts())
            dust.push_back({center + cand.rho * iv.lo, center + cand.rho * iv.hi, widx});
        }
  std::sort(dust.begin(), dust.end(), [](const DustIv& a, const DustIv& b) {
    return a.lo < b.lo;
  });

  using HeapItem = std::pair<Rational, std::uint32_t>;  // (hi, widx)
  auto heap_cmp = [](const HeapItem& a, const HeapItem& b) {
    return a.first > b.first;
  };
  std::priority_queue<HeapItem, std::vector<HeapItem>, decltype(heap_cmp)> expiry(heap_cmp);
  std::multiset<std::uint32_t> active;
  std::size_t d = 0;

  cert.cover.reserve(net.size());
  for (const Rational& t0 : net) {
    while (d < dust.size() && dust[d].lo <= t0) {
      if (dust[d].hi >= t0) {
        active.insert(dust[d].widx);
        expiry.emplace(dust[d].hi, dust[d].widx);
      }
      ++d;
    }
    while (!expiry.empty() && expiry.top().first < t0) {
      active.erase(active.find(expiry.top().second));
      expiry.pop();
    }
    if (active.empty())
      return VerifyFailure{"net point has no covering word pair", t0};
    std::uint32_t widx = *active.begin();
    int ap2 = static_cast<int>(widx % np);
    int ap1 = static_cast<int>((widx / np) % np);
    int a2 = static_cast<int>((widx / np / np) % n);
    int a1 = static_cast<int>(widx / np / np / n);
    CoverEntry entry;
    entry.t0 = t0;
    entry.cover = {t0 - step, t0 + step};
    entry.witness = {Word{{a1, a2}}, Word{{ap1, ap2}}};
    const Rational& eb = frame.eb[static_cast<std::size_t>(a1) * n + a2];
    const Rational& ebp = frame.ebp[static_cast<std::size_t>(ap1) * np + ap2];
    entry.t_hat0 = (t0 + ebp - eb) / cand.rho;
    entry.image = {(entry.cover.lo + ebp - eb) / cand.rho,
                   (entry.cover.hi + ebp - eb) / cand.rho};
    if (!cand.member_L0(entry.t_hat0))
      return VerifyFailure{"witness image leaves the candidate set", t0};
    // Claim: |image endpoint - t_hat0| = r^5 / rho = r^3 < rho/2, strictly.
    if (!(entry.t_hat0 - entry.image.lo < margin &&
          entry.image.hi - entry.t_hat0 < margin))
      return VerifyFailure{"image margin not strictly below rho/2", t0};
    cert.cover.push_back(std::move(entry));
  }

  const Rational linked_lo = -cand.s0, linked_hi = 1;
  IntervalUnion clipped = cand.L.clip(linked_lo, linked_hi);
  if (auto j = clipped.largest_component()) {
    cert.J = *j;
  } else {
    cert.vacuous = true;
  }
  return cert;
}

ReplayResult replay(const Certificate& cert) {
  auto fail = [](std::string what) { return ReplayResult{false, std::move(what)}; };

  if (!validate(cert.base_K).ok()) return fail("base K invalid");
  if (!validate(cert.base_Kp).ok()) return fail("base K' invalid");
  if (cert.mode == Mode::Self && !(cert.base_K == cert.base_Kp))
    return fail("self mode requires identical sides");
  if (cert.base_K.ratio != cert.base_Kp.ratio)
    return fail("presentations do not share a ratio");

  for (const auto& [a, w] : cert.omega0.omega) {
    if (w < -1 || w > 1) return fail("omega component outside [-1,1]");
    Rational grid = w * 65536;
    if (grid.get_den() != 1) return fail("omega component off the dyadic grid");
    if (std::find(cert.A1.begin(), cert.A1.end(), a) == cert.A1.end())
      return fail("omega supported outside A1");
  }
  for (int a : cert.A1) {
    if (a <= 0 || a >= cert.base_K.size() - 1)
      return fail("A1 contains an endmost letter");
    if (std::find(cert.A2.begin(), cert.A2.end(), a) != cert.A2.end())
      return fail("A1 and A2 intersect");
  }

  HomogeneousIFS reperturbed;
  try {
    reperturbed = perturb(cert.base_K, cert.A1, cert.omega0.omega,
                          cert.c0 * cert.base_K.ratio);
  } catch (const std::exception& e) {
    return fail(std::string("perturbation invalid: ") + e.what());
  }
  if (!(reperturbed == cert.perturbed_K))
    return fail("stored perturbed IFS does not match perturb(base, omega0)");
  if (!validate(cert.perturbed_K).ok()) return fail("perturbed IFS invalid");

  const Rational rho = cert.base_K.ratio * cert.base_K.ratio;
  const Rational s0 = s0_of(cert.base_K, cert.base_Kp);
  const Rational bound = 1 + s0;
  if (!(cert.L1 == cert.L0.thicken(rho))) return fail("L1 is not the rho-neighborhood of L0");
  if (!(cert.L == cert.L0.thicken(rho / 2))) return fail("L is not the rho/2-neighborhood of L0");
  for (const auto& iv : cert.L0.parts())
    if (iv.lo < -bound || iv.hi > bound) return fail("L0 leaves [-(1+s0), 1+s0]");

  if (cert.vacuous) {
    if (!cert.L.empty() && cert.J) return fail("vacuous certificate with content");
    return ReplayResult{true, "vacuous certificate (empty L): no interval certified"};
  }

  // cover must reach every point of L
  std::vector<Interval> cover_parts;
  cover_parts.reserve(cert.cover.size());
  const Rational step = pow_rat(cert.base_K.ratio, 5);
  for (const auto& entry : cert.cover) cover_parts.push_back(entry.cover);
  IntervalUnion cover_union(std::move(cover_parts));
  if (!cover_union.contains(cert.L)) return fail("cover intervals do not cover L");

  const Rational margin = rho / 2;
  const HomogeneousIFS& Kw = cert.perturbed_K;
  const HomogeneousIFS& Kp = cert.mode == Mode::Self ? cert.perturbed_K : cert.base_Kp;
  for (const auto& entry : cert.cover) {
    if (entry.cover.hi - entry.cover.lo > 2 * step)
      return fail("cover interval longer than 2 rho^{5/2}");
    if (entry.cover.lo > entry.t0 || entry.t0 > entry.cover.hi)
      return fail("net point outside its cover interval");
    // recompute the affine images; stored values are untrusted
    Rational t_hat0 = renormalize_word(entry.t0, Kw, Kp, entry.witness.b, entry.witness.bp);
    Rational img_lo = renormalize_word(entry.cover.lo, Kw, Kp, entry.witness.b, entry.witness.bp);
    Rational img_hi = renormalize_word(entry.cover.hi, Kw, Kp, entry.witness.b, entry.witness.bp);
    if (!(abs_rat(t_hat0) < bound && cert.L0.contains(t_hat0)))
      return fail("witness image of a net point leaves L0");
    if (!(t_hat0 - img_lo < margin && img_hi - t_hat0 < margin))
      return fail("image of a cover interval misses the strict rho/2 margin");
  }

  if (!cert.J) return fail("non-vacuous certificate without a certified interval");
  IntervalUnion linked_L = cert.L.clip(-s0, 1);
  if (!linked_L.contains(IntervalUnion::single(cert.J->lo, cert.J->hi)))
    return fail("J is not contained in L intersected with the linked range");
  if (cert.J->lo > cert.J->hi) return fail("J empty in a non-vacuous certificate");
  return ReplayResult{true, ""};
}

}  // namespace cantorsum
