#pragma once

#include <string>

#include "cantorsum/ifs.hpp"
#include "cantorsum/interval_union.hpp"

namespace cantorsum {

// Newhouse thickness of the depth-1 presentation: bridges are the cylinders
// themselves, so the value is cylinder length over the largest gap. Throws on
// single-letter alphabets (no gaps).
Rational thickness(const HomogeneousIFS& ifs);

enum class Regime { Cantor, GapLemma, Mysterious };

std::string to_string(Regime r);

struct RegimeVerdict {
  Rational a, b;
  Regime verdict = Regime::Mysterious;
  Rational thickness_product;  // a/(1-2a) * b/(1-2b)
  double dimension_sum;        // display only
  bool dim_sum_below_1 = false;
  bool dim_sum_equals_1 = false;  // detected exactly (both logs rational)
};

// Dimension-sum condition decided exactly: writing u = log2(1/a), the sum is
// below 1 iff (u-1)(v-1) > 1, and rational bounds p/q on each log come from
// integer-power comparisons x^q vs 2^p. Thickness condition is rational.
RegimeVerdict classify_region(const Rational& a, const Rational& b);

enum class SumMode { Sum, Difference };

// Exact union of all depth-n cylinder sums/differences, computed by the
// depth recursion S_k = union over (a,a') of (e_a +- e'_a') + rho * S_{k-1}
// with per-level merging; identical to the flat enumeration as a set.
// component_cap bounds the intermediate component count.
IntervalUnion brute_sumset(const HomogeneousIFS& K, const HomogeneousIFS& Kp,
                           int depth, SumMode mode,
                           std::size_t component_cap = 5000000);

// CSV over the (a, b) grid {i/(2R) : 0 < i < R}^2 with verdicts and the
// depth-n sum-cover gap count per cell.
std::string region_grid_csv(int resolution, int depth);

}  // namespace cantorsum
