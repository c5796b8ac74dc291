#pragma once

#include <cstddef>
#include <vector>

#include "cantorsum/rational.hpp"

namespace cantorsum {

struct Interval {
  Rational lo, hi;  // closed, lo <= hi
  Rational length() const { return hi - lo; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool operator==(const Interval& o) const { return lo == o.lo && hi == o.hi; }
};

// Finite union of disjoint closed intervals, sorted ascending. Touching
// intervals are merged on construction, so disjointness here is strict.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<Interval> parts);  // merges and sorts

  static IntervalUnion single(Rational lo, Rational hi);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t component_count() const { return parts_.size(); }

  Rational measure() const;
  bool contains(const Rational& x) const;
  bool contains(const IntervalUnion& other) const;

  // Minkowski sum with [-delta, delta], delta >= 0.
  IntervalUnion thicken(const Rational& delta) const;

  IntervalUnion clip(const Rational& lo, const Rational& hi) const;

  IntervalUnion unite(const IntervalUnion& other) const;

  // Largest component; ties broken to the leftmost.
  std::optional<Interval> largest_component() const;

  bool operator==(const IntervalUnion& other) const = default;

 private:
  std::vector<Interval> parts_;
};

}  // namespace cantorsum
