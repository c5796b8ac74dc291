#pragma once

#include <map>
#include <vector>

#include "cantorsum/ifs.hpp"
#include "cantorsum/interval_union.hpp"

namespace cantorsum {

// Exact histogram of the pushforward of (uniform x uniform) under
// (x, x') -> x - x', in the K-normalized frame. Bin k covers
// [(2k-1)w/2, (2k+1)w/2] with w = (1 + s0) * ratio^depth; the mass of each
// cylinder-pair difference interval is split across bins proportionally.
struct DensityHistogram {
  int depth = 0;
  Rational bin_width;
  std::map<long, Rational> masses;  // bin index -> mass

  Rational total_mass() const;
  // Riemann estimate of the squared L2 norm: sum of mass^2 / width.
  Rational l2_riemann() const;
  // Integral of the step density over a closed interval.
  Rational mass_in(const Interval& iv) const;
};

DensityHistogram pushforward_histogram(const HomogeneousIFS& K,
                                       const HomogeneousIFS& Kp, int depth,
                                       std::size_t pair_cap = 2000000);

struct L2Report {
  std::vector<std::pair<int, Rational>> estimates;  // (depth, estimate)
  Rational last_ratio;  // last consecutive ratio of estimates
  bool bounded;         // last ratio <= 1 + tolerance
};

// Empirical proxy for the L2-density hypothesis; needs >= 3 depths.
L2Report l2_estimate(const std::vector<DensityHistogram>& histograms,
                     const Rational& tolerance = Rational(1) / 10);

// Good/bad classification of depth-1 cylinder pairs. A pair is good when at
// most threshold = |A||A'| * r / c2 other pairs project to centers strictly
// closer than (1 + s0) * r; r is the common depth-1 ratio of the inputs.
struct GoodPairTable {
  struct Row {
    int a, ap;
    Rational center;  // center of J(a,a') = pi(I(a) x I'(a'))
    long neighbors;
    bool good;
  };
  std::vector<Row> rows;  // lexicographic in (a, ap)
  long good_count = 0;
  long total = 0;  // |B| = |A| * |A'|
  Rational threshold;
  Rational neighbor_radius;  // (1 + s0) * r
  Rational j_length;         // |J(a,a')| = (1 + s0) * r

  bool is_good(int a, int ap, int alphabet_p_size) const {
    return rows[static_cast<std::size_t>(a) * alphabet_p_size + ap].good;
  }
  // Degree of a letter: number of good pairs with first coordinate a.
  long degree(int a, int alphabet_p_size) const;
};

GoodPairTable classify_pairs(const HomogeneousIFS& K, const HomogeneousIFS& Kp,
                             const Rational& c2);

// Per-pair mass versus rho^{(d+d')/2}. For uniform measures on homogeneous
// sets the two are equal exactly (r^d = 1/|A| by definition of d), so the
// report's c4 is 1.
struct MassBoundsReport {
  struct Row {
    int a, ap;
    Rational mass;       // 1 / (|A| * |A'|)
    Rational rho_power;  // r^{d+d'} evaluated exactly via the identity
  };
  std::vector<Row> rows;
  bool exact;   // every row has mass == rho_power
  Rational c4;  // 1 when exact
};

MassBoundsReport measure_bounds_check(const HomogeneousIFS& K,
                                      const HomogeneousIFS& Kp);

}  // namespace cantorsum
