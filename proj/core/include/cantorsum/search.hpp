#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cantorsum/recurrent.hpp"

namespace cantorsum {

struct PerturbationVector {
  std::map<int, Rational> omega;  // letter of A1 -> dyadic value in [-1,1]
  std::uint64_t seed = 0;
  std::uint64_t draw_index = 0;
};

// Draw `index` of the seeded dyadic-uniform distribution on [-1,1]^{A1}.
PerturbationVector draw_perturbation(const std::vector<int>& A1,
                                     std::uint64_t seed, std::uint64_t index);

// The perturbed IFS in paper scaling: offsets of A1 shift by c0 * rho *
// omega(a) * hull, where rho = ratio^2 (the inputs are the rho^{1/2}
// presentations). Equivalent to ifs-core perturb with amplitude c0 * ratio.
HomogeneousIFS apply_perturbation(const HomogeneousIFS& K,
                                  const std::vector<int>& A1,
                                  const PerturbationVector& omega,
                                  const Rational& c0);

// Non-throwing validity probe for the same operation.
bool perturbation_valid(const HomogeneousIFS& K, const std::vector<int>& A1,
                        const PerturbationVector& omega, const Rational& c0);

struct MembershipResult {
  bool member = false;
  std::optional<WitnessPair> witness;
  Rational image;  // image of t under the witnessing operator, when member
};

// Omega^0(t) membership: some depth-2 word pair maps t into L0 under the
// perturbed operators. Stored witnesses are tried first, then the full
// lexicographic enumeration of A^2 x A'^2.
MembershipResult omega0_member(const Rational& t, const PerturbationVector& omega,
                               const RecurrentCandidate& cand, const Rational& c0);

// rho^{5/2}-dense net of L1 (all points in L1, spacing <= rho^{5/2} = r^5).
std::vector<Rational> delta_net(const RecurrentCandidate& cand);

struct SearchStats {
  long draws_attempted = 0;
  long invalid_draws = 0;
  bool misconfigured = false;  // invalid rate above 1/2
  // Per net point, over the draws up to and including the accepted one.
  std::vector<long> point_attempts;
  std::vector<long> point_failures;
  bool full_scan = false;  // failures recorded past the first miss per draw
};

struct SearchResult {
  std::optional<PerturbationVector> omega0;  // first accepted draw
  SearchStats stats;
};

struct SearchOptions {
  bool full_scan = false;
  int workers = 0;  // 0: use CANTORSUM_WORKERS or 1
};

// Seeded randomized search for omega0 covering every net point. Rejected
// (disjointness-breaking) draws count toward `trials`. Deterministic for a
// given seed regardless of worker count: the accepted draw is the lowest
// successful index and stats aggregate draws up to it.
SearchResult search_omega(const RecurrentCandidate& cand, long trials,
                          std::uint64_t seed, const Rational& c0,
                          const SearchOptions& opts = {});

struct CoverEntry {
  Rational t0;         // net point
  Interval cover;      // [t0 - r^5, t0 + r^5]
  WitnessPair witness;
  Rational t_hat0;     // image of t0, lies in L0
  Interval image;      // exact affine image of the cover interval
};

struct Certificate {
  Mode mode = Mode::Cross;
  HomogeneousIFS base_K, base_Kp;  // unperturbed rho^{1/2}-presentations
  HomogeneousIFS perturbed_K;
  std::vector<int> A1, A2;
  Rational c0, c2;
  long N = 0;
  PerturbationVector omega0;
  IntervalUnion L0, L1, L;
  std::vector<CoverEntry> cover;
  std::optional<Interval> J;  // largest component of L clipped to [-s0, 1]
  bool vacuous = false;       // empty L, certificate carries no content
};

struct VerifyFailure {
  std::string what;
  std::optional<Rational> failing_point;
};

// Covers L with intervals of length 2 rho^{5/2} centered at net points and
// checks, in exact arithmetic, that each image lands strictly within rho/2
// of its witnessed L0 point. Emits the certificate on full success.
std::variant<Certificate, VerifyFailure> verify_recurrent(
    const RecurrentCandidate& cand, const PerturbationVector& omega0,
    const Rational& c0);

struct ReplayResult {
  bool pass = false;
  std::string detail;  // first failing check when !pass
};

// Independent re-verification of every certificate invariant from ifs-core
// and configuration primitives; trusts no stored image.
ReplayResult replay(const Certificate& cert);

}  // namespace cantorsum
