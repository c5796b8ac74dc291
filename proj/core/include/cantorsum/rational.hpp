#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace cantorsum {

// All geometry in this library is exact. Rational is GMP's canonical p/q.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational rat(long p, long q = 1) {
  if (q == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

// Parses "p/q" or "p" (optionally signed). Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& s);

// Canonical "p/q" (or "p" when q == 1).
std::string to_string(const Rational& q);

// Decimal rendering with the given number of fractional digits, round-to-nearest.
std::string to_decimal(const Rational& q, int digits);

inline Integer floor_int(const Rational& q) {
  Integer f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return f;
}

inline Integer ceil_int(const Rational& q) {
  Integer c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return c;
}

inline Rational pow_rat(const Rational& base, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num().get_mpz_t(), base.get_num().get_mpz_t(), e);
  mpz_pow_ui(r.get_den().get_mpz_t(), base.get_den().get_mpz_t(), e);
  r.canonicalize();
  return r;
}

inline Rational abs_rat(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace cantorsum
