#include "cantorsum/baselines.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cantorsum {

Rational thickness(const HomogeneousIFS& ifs) {
  if (ifs.size() < 2)
    throw std::invalid_argument("thickness: undefined for single-letter alphabets");
  const Rational len = ifs.cylinder_length();
  Rational max_gap = 0;
  for (int a = 0; a + 1 < ifs.size(); ++a) {
    Rational gap = ifs.offsets[a + 1] - ifs.offsets[a] - len;
    if (gap <= 0)
      throw std::invalid_argument("thickness: cylinders overlap or touch");
    if (gap > max_gap) max_gap = gap;
  }
  return len / max_gap;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Cantor: return "CantorRegime";
    case Regime::GapLemma: return "GapLemmaRegime";
    default: return "Mysterious";
  }
}

namespace {

// Exact comparison of log2(x) with p/q for rational x > 1, q > 0:
// log2 x > p/q  iff  x^q > 2^p.
int cmp_log2(const Rational& x, long p, long q) {
  Rational lhs = pow_rat(x, static_cast<unsigned long>(q));
  Rational rhs = 1;
  if (p >= 0) {
    mpz_mul_2exp(rhs.get_num().get_mpz_t(), rhs.get_num().get_mpz_t(),
                 static_cast<mp_bitcnt_t>(p));
  } else {
    mpz_mul_2exp(rhs.get_den().get_mpz_t(), rhs.get_den().get_mpz_t(),
                 static_cast<mp_bitcnt_t>(-p));
  }
  rhs.canonicalize();
  return lhs > rhs ? 1 : (lhs == rhs ? 0 : -1);
}

struct LogEnclosure {
  Rational lo, hi;    // lo <= log2(x) <= hi
  bool exact = false; // log2(x) == lo == hi, hit an integer power
};

// Dyadic bisection of log2(x) for rational x > 1, detecting exact rational
// logarithms (x = 2^{p/q}) along the way.
LogEnclosure enclose_log2(const Rational& x, int refinements) {
  long hi = 1;
  while (cmp_log2(x, hi, 1) > 0) ++hi;
  if (cmp_log2(x, hi, 1) == 0) return {rat(hi), rat(hi), true};
  long lo_p = hi - 1, lo_q = 1, hi_p = hi, hi_q = 1;
  for (int i = 0; i < refinements; ++i) {
    long mp = lo_p * hi_q + hi_p * lo_q;
    long mq = 2 * lo_q * hi_q;
    long g = std::gcd(std::abs(mp), mq);
    if (g > 1) {
      mp /= g;
      mq /= g;
    }
    int c = cmp_log2(x, mp, mq);
    if (c == 0) return {rat(mp, mq), rat(mp, mq), true};
    if (c > 0) {
      lo_p = mp;
      lo_q = mq;
    } else {
      hi_p = mp;
      hi_q = mq;
    }
    if (mq > (1L << 40)) break;
  }
  return {rat(lo_p, lo_q), rat(hi_p, hi_q), false};
}

}  // namespace

RegimeVerdict classify_region(const Rational& a, const Rational& b) {
  if (!(a > 0 && a < rat(1, 2) && b > 0 && b < rat(1, 2)))
    throw std::invalid_argument("classify_region: parameters must be in (0, 1/2)");

  RegimeVerdict v;
  v.a = a;
  v.b = b;
  v.thickness_product = (a / (1 - 2 * a)) * (b / (1 - 2 * b));
  double la = std::log(1.0 / to_double(a)), lb = std::log(1.0 / to_double(b));
  v.dimension_sum = std::log(2.0) / la + std::log(2.0) / lb;

  // dim sum < 1  iff  log2(1/(2a)) * log2(1/(2b)) > 1
  Rational x = 1 / (2 * a), y = 1 / (2 * b);
  for (int refinements = 8;; refinements *= 2) {
    LogEnclosure ex = enclose_log2(x, refinements);
    LogEnclosure ey = enclose_log2(y, refinements);
    if (ex.exact && ey.exact) {
      Rational prod = ex.lo * ey.lo;
      v.dim_sum_below_1 = prod > 1;
      v.dim_sum_equals_1 = prod == 1;
      break;
    }
    if (ex.lo * ey.lo > 1) {
      v.dim_sum_below_1 = true;
      break;
    }
    if (ex.hi * ey.hi < 1) {
      v.dim_sum_below_1 = false;
      break;
    }
    if (refinements > 512)
      throw std::runtime_error(
          "classify_region: boundary undecidable at practical precision");
  }

  if (v.thickness_product >= 1)
    v.verdict = Regime::GapLemma;  // wins if the conditions were ever met jointly
  else if (v.dim_sum_below_1)
    v.verdict = Regime::Cantor;
  else
    v.verdict = Regime::Mysterious;
  return v;
}

namespace {

// Depth-n cylinder cover of one set, merged per level.
IntervalUnion depth_cover(const HomogeneousIFS& K, int depth,
                          std::size_t component_cap) {
  IntervalUnion s = IntervalUnion::single(0, K.hull);
  for (int d = 0; d < depth; ++d) {
    std::vector<Interval> next;
    next.reserve(K.offsets.size() * s.parts().size());
    for (const auto& e : K.offsets)
      for (const auto& iv : s.parts()) {
        next.push_back({e + K.ratio * iv.lo, e + K.ratio * iv.hi});
        if (next.size() > component_cap)
          throw std::runtime_error("brute_sumset: component cap exceeded");
      }
    s = IntervalUnion(std::move(next));
  }
  return s;
}

}  // namespace

IntervalUnion brute_sumset(const HomogeneousIFS& K, const HomogeneousIFS& Kp,
                           int depth, SumMode mode, std::size_t component_cap) {
  if (depth < 0) throw std::invalid_argument("brute_sumset: depth < 0");
  if (K.ratio == Kp.ratio) {
    // joint recursion: merge at every level
    const Rational rho = K.ratio;
    IntervalUnion s = mode == SumMode::Sum
                          ? IntervalUnion::single(0, K.hull + Kp.hull)
                          : IntervalUnion::single(-Kp.hull, K.hull);
    for (int d = 0; d < depth; ++d) {
      std::vector<Interval> next;
      next.reserve(static_cast<std::size_t>(K.size()) * Kp.size() *
                   s.parts().size());
      for (int a = 0; a < K.size(); ++a) {
        for (int ap = 0; ap < Kp.size(); ++ap) {
          Rational base = mode == SumMode::Sum
                              ? Rational(K.offsets[a] + Kp.offsets[ap])
                              : Rational(K.offsets[a] - Kp.offsets[ap]);
          for (const auto& iv : s.parts())
            next.push_back({base + rho * iv.lo, base + rho * iv.hi});
          if (next.size() > component_cap)
            throw std::runtime_error("brute_sumset: component cap exceeded");
        }
      }
      s = IntervalUnion(std::move(next));
    }
    return s;
  }
  // different ratios: Minkowski-combine the per-side covers
  IntervalUnion ca = depth_cover(K, depth, component_cap);
  IntervalUnion cb = depth_cover(Kp, depth, component_cap);
  if (ca.parts().size() * cb.parts().size() > component_cap)
    throw std::runtime_error("brute_sumset: component cap exceeded");
  std::vector<Interval> out;
  out.reserve(ca.parts().size() * cb.parts().size());
  for (const auto& u : ca.parts())
    for (const auto& v : cb.parts()) {
      if (mode == SumMode::Sum)
        out.push_back({u.lo + v.lo, u.hi + v.hi});
      else
        out.push_back({u.lo - v.hi, u.hi - v.lo});
    }
  return IntervalUnion(std::move(out));
}

std::string region_grid_csv(int resolution, int depth) {
  if (resolution < 2)
    throw std::invalid_argument("region_grid: resolution must be >= 2");
  std::ostringstream out;
  out << "a,b,d_sum,thickness_product,verdict,gaps_at_depth,"
         "a_exact,b_exact,thickness_product_exact\n";
  out << std::fixed << std::setprecision(6);
  for (int i = 1; i < resolution; ++i) {
    for (int j = 1; j < resolution; ++j) {
      Rational a = rat(i, 2L * resolution), b = rat(j, 2L * resolution);
      RegimeVerdict v = classify_region(a, b);
      HomogeneousIFS Ka = middle_alpha(a), Kb = middle_alpha(b);
      std::size_t gaps =
          brute_sumset(Ka, Kb, depth, SumMode::Sum).component_count() - 1;
      out << to_decimal(a, 6) << ',' << to_decimal(b, 6) << ','
          << v.dimension_sum << ',' << to_decimal(v.thickness_product, 6)
          << ',' << to_string(v.verdict) << ',' << gaps << ',' << to_string(a)
          << ',' << to_string(b) << ',' << to_string(v.thickness_product)
          << '\n';
    }
  }
  return out.str();
}

}  // namespace cantorsum
