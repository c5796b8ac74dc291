#include "cantorsum/interval_union.hpp"

#include <algorithm>

namespace cantorsum {

IntervalUnion::IntervalUnion(std::vector<Interval> parts) {
  std::erase_if(parts, [](const Interval& iv) { return iv.lo > iv.hi; });
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) {
              return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
            });
  for (auto& iv : parts) {
    if (!parts_.empty() && iv.lo <= parts_.back().hi) {
      if (iv.hi > parts_.back().hi) parts_.back().hi = iv.hi;
    } else {
      parts_.push_back(iv);
    }
  }
}

IntervalUnion IntervalUnion::single(Rational lo, Rational hi) {
  return IntervalUnion({Interval{std::move(lo), std::move(hi)}});
}

Rational IntervalUnion::measure() const {
  Rational m = 0;
  for (const auto& iv : parts_) m += iv.hi - iv.lo;
  return m;
}

bool IntervalUnion::contains(const Rational& x) const {
  auto it = std::upper_bound(
      parts_.begin(), parts_.end(), x,
      [](const Rational& v, const Interval& iv) { return v < iv.lo; });
  if (it == parts_.begin()) return false;
  --it;
  return x <= it->hi;
}

bool IntervalUnion::contains(const IntervalUnion& other) const {
  for (const auto& iv : other.parts_) {
    auto it = std::upper_bound(
        parts_.begin(), parts_.end(), iv.lo,
        [](const Rational& v, const Interval& p) { return v < p.lo; });
    if (it == parts_.begin()) return false;
    --it;
    if (iv.hi > it->hi) return false;
  }
  return true;
}

IntervalUnion IntervalUnion::thicken(const Rational& delta) const {
  std::vector<Interval> out;
  out.reserve(parts_.size());
  for (const auto& iv : parts_) out.push_back({iv.lo - delta, iv.hi + delta});
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::clip(const Rational& lo, const Rational& hi) const {
  std::vector<Interval> out;
  for (const auto& iv : parts_) {
    Rational a = std::max(iv.lo, lo), b = std::min(iv.hi, hi);
    if (a <= b) out.push_back({a, b});
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& other) const {
  std::vector<Interval> all = parts_;
  all.insert(all.end(), other.parts_.begin(), other.parts_.end());
  return IntervalUnion(std::move(all));
}

std::optional<Interval> IntervalUnion::largest_component() const {
  if (parts_.empty()) return std::nullopt;
  const Interval* best = &parts_.front();
  for (const auto& iv : parts_)
    if (iv.length() > best->length()) best = &iv;
  return *best;
}

}  // namespace cantorsum
