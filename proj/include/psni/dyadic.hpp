#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <stdexcept>

// Exact 2-primary combinatorics: binary digit sums, 2-adic valuations of
// binomial coefficients (Kummer carries), Lucas parity, and exact big-integer
// binomials used as oracles. All functions are pure.

namespace psni::dyadic {

using BigInt = boost::multiprecision::cpp_int;

// Number of 1's in the binary expansion of n.
inline int alpha(long long n) {
  if (n < 0) throw std::invalid_argument("alpha: negative argument");
  int c = 0;
  for (unsigned long long u = static_cast<unsigned long long>(n); u; u &= u - 1) ++c;
  return c;
}

// Exponent of 2 in n. Zero has infinite valuation and is rejected.
inline int nu(long long n) {
  if (n == 0) throw std::domain_error("nu: valuation of 0 is infinite");
  unsigned long long u = static_cast<unsigned long long>(n < 0 ? -n : n);
  int e = 0;
  while (!(u & 1)) { u >>= 1; ++e; }
  return e;
}

inline int nu(const BigInt& n) {
  if (n == 0) throw std::domain_error("nu: valuation of 0 is infinite");
  return static_cast<int>(boost::multiprecision::lsb(n < 0 ? BigInt(-n) : n));
}

// Smallest 2-power >= h.
inline long long p_pow(long long h) {
  if (h < 1) throw std::invalid_argument("p_pow: argument must be positive");
  long long p = 1;
  while (p < h) p <<= 1;
  return p;
}

// A 2-adic valuation that may be infinite (the coefficient is zero).
struct Valuation {
  bool is_infinite = false;
  long long value = 0;

  static Valuation infinite() { return Valuation{true, 0}; }
  static Valuation finite(long long v) { return Valuation{false, v}; }

  bool operator==(const Valuation&) const = default;
};

// Binomial coefficient C(top, bottom). A negative top encodes the paper-style
// 2^L - k convention for large L; bottom is always nonnegative.
struct BinomialSpec {
  long long top = 0;
  long long bottom = 0;
};

// nu(C(top, bottom)). For 0 <= bottom <= top this is
// alpha(bottom) + alpha(top-bottom) - alpha(top), the base-2 carry count of
// bottom + (top-bottom). For top = -k < 0 it is nu(C(bottom+k-1, bottom)).
inline Valuation binom_nu(const BinomialSpec& spec) {
  if (spec.bottom < 0) throw std::invalid_argument("binom_nu: bottom must be nonnegative");
  if (spec.top < 0) {
    long long k = -spec.top;
    return binom_nu(BinomialSpec{spec.bottom + k - 1, spec.bottom});
  }
  if (spec.bottom > spec.top) return Valuation::infinite();
  return Valuation::finite(alpha(spec.bottom) + alpha(spec.top - spec.bottom) - alpha(spec.top));
}

inline Valuation binom_nu(long long top, long long bottom) {
  return binom_nu(BinomialSpec{top, bottom});
}

// Lucas: C(top, bottom) is odd iff the bits of bottom are a subset of the
// bits of top. bottom > top gives a zero coefficient, reported as even.
inline bool binom_parity(long long top, long long bottom) {
  if (top < 0 || bottom < 0) throw std::invalid_argument("binom_parity: nonnegative arguments required");
  if (bottom > top) return false;
  return (static_cast<unsigned long long>(bottom) & ~static_cast<unsigned long long>(top)) == 0;
}

// Exact binomial coefficient, with C(-k, n) = (-1)^n C(n+k-1, n).
inline BigInt exact_binom(long long top, long long bottom) {
  if (bottom < 0) return 0;
  if (top >= 0) {
    if (bottom > top) return 0;
    if (bottom > top - bottom) bottom = top - bottom;
    BigInt r = 1;
    for (long long i = 1; i <= bottom; ++i) {
      r *= (top + 1 - i);
      r /= i;
    }
    return r;
  }
  long long k = -top;
  BigInt r = exact_binom(bottom + k - 1, bottom);
  return (bottom % 2 == 0) ? r : BigInt(-r);
}

// sum_j C(h,j) C(-M-h, M-j); by Vandermonde this equals C(-M, M).
inline BigInt vandermonde_lhs(long long h, long long M) {
  if (h < 0 || M < 1) throw std::invalid_argument("vandermonde_lhs: need h >= 0, M >= 1");
  BigInt s = 0;
  for (long long j = 0; j <= h; ++j)
    s += exact_binom(h, j) * exact_binom(-M - h, M - j);
  return s;
}

}  // namespace psni::dyadic
