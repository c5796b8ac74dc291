#include "cantorsum/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cantorsum/configuration.hpp"

namespace cantorsum {

Rational DensityHistogram::total_mass() const {
  Rational t = 0;
  for (const auto& [k, m] : masses) t += m;
  return t;
}

Rational DensityHistogram::l2_riemann() const {
  Rational t = 0;
  for (const auto& [k, m] : masses) t += m * m;
  return t / bin_width;
}

Rational DensityHistogram::mass_in(const Interval& iv) const {
  Rational t = 0;
  for (const auto& [k, m] : masses) {
    Rational blo = Rational(2 * k - 1) * bin_width / 2;
    Rational bhi = Rational(2 * k + 1) * bin_width / 2;
    Rational lo = std::max(blo, iv.lo), hi = std::min(bhi, iv.hi);
    if (lo < hi) t += m * (hi - lo) / bin_width;
  }
  return t;
}

namespace {

std::vector<Rational> depth_offsets_norm(const HomogeneousIFS& ifs, int depth) {
  std::vector<Rational> out{Rational(0)};
  Rational scale = 1;
  for (int k = 0; k < depth; ++k) {
    std::vector<Rational> next;
    next.reserve(out.size() * ifs.size());
    for (const auto& o : out)
      for (int a = 0; a < ifs.size(); ++a)
        next.push_back(o + scale * ifs.norm_offset(a));
    out = std::move(next);
    scale *= ifs.ratio;
  }
  return out;
}

}  // namespace

DensityHistogram pushforward_histogram(const HomogeneousIFS& K,
                                       const HomogeneousIFS& Kp, int depth,
                                       std::size_t pair_cap) {
  if (depth < 0) throw std::invalid_argument("pushforward_histogram: depth < 0");
  if (K.ratio != Kp.ratio)
    throw std::invalid_argument("pushforward_histogram: ratios must match");
  double pairs = std::pow(static_cast<double>(K.size()), depth) *
                 std::pow(static_cast<double>(Kp.size()), depth);
  if (pairs > static_cast<double>(pair_cap))
    throw std::invalid_argument("pushforward_histogram: pair count exceeds cap");

  const Rational s0 = s0_of(K, Kp);
  const Rational rn = pow_rat(K.ratio, static_cast<unsigned long>(depth));
  DensityHistogram h;
  h.depth = depth;
  h.bin_width = (1 + s0) * rn;

  auto ow = depth_offsets_norm(K, depth);
  auto owp = depth_offsets_norm(Kp, depth);
  for (auto& o : owp) o *= s0;  // K' offsets into the normalized frame

  const Rational mass = Rational(1) / (Rational(static_cast<long>(ow.size())) *
                                       Rational(static_cast<long>(owp.size())));
  const Rational& w = h.bin_width;
  for (const auto& e : ow) {
    for (const auto& ep : owp) {
      Rational lo = e - ep - rn * s0;
      Rational hi = e - ep + rn;  // width (1+s0) * rn
      long k0 = floor_int(lo / w + rat(1, 2)).get_si();
      long k1 = floor_int(hi / w + rat(1, 2)).get_si();
      for (long k = k0; k <= k1; ++k) {
        Rational blo = Rational(2 * k - 1) * w / 2;
        Rational bhi = Rational(2 * k + 1) * w / 2;
        Rational ov = std::min(hi, bhi) - std::max(lo, blo);
        if (ov > 0) h.masses[k] += mass * ov / (hi - lo);
      }
    }
  }
  std::erase_if(h.masses, [](const auto& kv) { return kv.second == 0; });
  return h;
}

L2Report l2_estimate(const std::vector<DensityHistogram>& histograms,
                     const Rational& tolerance) {
  if (histograms.size() < 3)
    throw std::invalid_argument("l2_estimate: need at least 3 depths");
  L2Report rep;
  for (const auto& h : histograms)
    rep.estimates.emplace_back(h.depth, h.l2_riemann());
  const auto& prev = rep.estimates[rep.estimates.size() - 2].second;
  const auto& last = rep.estimates.back().second;
  if (prev == 0) {
    rep.last_ratio = 0;
    rep.bounded = last == 0;
    return rep;
  }
  rep.last_ratio = last / prev;
  rep.bounded = rep.last_ratio <= 1 + tolerance;
  return rep;
}

long GoodPairTable::degree(int a, int alphabet_p_size) const {
  long d = 0;
  for (int ap = 0; ap < alphabet_p_size; ++ap)
    if (rows[static_cast<std::size_t>(a) * alphabet_p_size + ap].good) ++d;
  return d;
}

GoodPairTable classify_pairs(const HomogeneousIFS& K, const HomogeneousIFS& Kp,
                             const Rational& c2) {
  if (K.ratio != Kp.ratio)
    throw std::invalid_argument("classify_pairs: ratios must match");
  if (!(c2 > 0)) throw std::invalid_argument("classify_pairs: c2 must be positive");

  const Rational s0 = s0_of(K, Kp);
  const Rational r = K.ratio;
  GoodPairTable table;
  table.total = static_cast<long>(K.size()) * Kp.size();
  // rho^{-(d+d'-1)/2} = |A| |A'| r exactly, via r^d = 1/|A|.
  table.threshold = Rational(table.total) * r / c2;
  table.neighbor_radius = (1 + s0) * r;
  table.j_length = (1 + s0) * r;

  std::vector<Rational> centers;
  centers.reserve(table.total);
  const Rational half_shift = r * (1 - s0) / 2;  // center of I(a) - I'(a')
  for (int a = 0; a < K.size(); ++a)
    for (int ap = 0; ap < Kp.size(); ++ap)
      centers.push_back(K.norm_offset(a) - s0 * Kp.norm_offset(ap) + half_shift);

  std::vector<Rational> sorted = centers;
  std::sort(sorted.begin(), sorted.end());
  for (int a = 0; a < K.size(); ++a) {
    for (int ap = 0; ap < Kp.size(); ++ap) {
      const Rational& c = centers[static_cast<std::size_t>(a) * Kp.size() + ap];
      // strictly-within-radius count, excluding the pair itself
      auto lo = std::upper_bound(sorted.begin(), sorted.end(), c - table.neighbor_radius);
      auto hi = std::lower_bound(sorted.begin(), sorted.end(), c + table.neighbor_radius);
      long n = static_cast<long>(hi - lo) - 1;
      bool good = Rational(n) <= table.threshold;
      table.rows.push_back({a, ap, c, n, good});
      if (good) ++table.good_count;
    }
  }
  return table;
}

MassBoundsReport measure_bounds_check(const HomogeneousIFS& K,
                                      const HomogeneousIFS& Kp) {
  MassBoundsReport rep;
  const Rational mass = Rational(1) / (Rational(K.size()) * Rational(Kp.size()));
  // r^{d} = 1/|A| and r^{d'} = 1/|A'| hold exactly by the definition of the
  // dimensions, so r^{d+d'} is the same rational as the pair mass.
  const Rational rho_power = mass;
  for (int a = 0; a < K.size(); ++a)
    for (int ap = 0; ap < Kp.size(); ++ap)
      rep.rows.push_back({a, ap, mass, rho_power});
  rep.exact = true;
  rep.c4 = 1;
  return rep;
}

}  // namespace cantorsum
