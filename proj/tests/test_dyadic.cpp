#include "psni/dyadic.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace psni::dyadic;

TEST_CASE("alpha counts binary ones") {
  CHECK(alpha(0) == 0);
  CHECK(alpha(1) == 1);
  CHECK(alpha(58) == 4);
  CHECK(alpha(223) == 7);
  CHECK(alpha((1LL << 40) - 1) == 40);
  CHECK_THROWS_AS(alpha(-1), std::invalid_argument);
}

TEST_CASE("nu extracts the 2-power") {
  CHECK(nu(40) == 3);
  CHECK(nu(3432) == 3);
  CHECK(nu(1) == 0);
  CHECK(nu(-96) == 5);
  CHECK(nu(BigInt(1) << 100) == 100);
  CHECK_THROWS_AS(nu(0), std::domain_error);
  CHECK_THROWS_AS(nu(BigInt(0)), std::domain_error);
}

TEST_CASE("p_pow is the least 2-power upper bound") {
  CHECK(p_pow(1) == 1);
  CHECK(p_pow(2) == 2);
  CHECK(p_pow(3) == 4);
  CHECK(p_pow(5) == 8);
  CHECK_THROWS_AS(p_pow(0), std::invalid_argument);
}

TEST_CASE("binom_nu matches the spot values") {
  CHECK(binom_nu(14, 7) == Valuation::finite(3));
  CHECK(binom_nu(-3, 2) == Valuation::finite(1));  // C(4,2) = 6
  CHECK(binom_nu(5, 7) == Valuation::infinite());
  CHECK(binom_nu(0, 0) == Valuation::finite(0));
  CHECK_THROWS_AS(binom_nu(5, -1), std::invalid_argument);
}

TEST_CASE("binom_parity is Lucas") {
  CHECK(binom_parity(62, 30));  // nu(C(62,30)) = 0
  CHECK_FALSE(binom_parity(14, 7));
  CHECK_FALSE(binom_parity(5, 7));  // zero coefficient
  CHECK(binom_parity(7, 3));
  CHECK_THROWS_AS(binom_parity(-1, 0), std::invalid_argument);
}

TEST_CASE("exact_binom small values and signs") {
  CHECK(exact_binom(5, 2) == 10);
  CHECK(exact_binom(14, 7) == 3432);
  CHECK(exact_binom(5, 7) == 0);
  CHECK(exact_binom(-3, 2) == 6);
  CHECK(exact_binom(-3, 3) == -10);  // (-1)^3 C(5,3)
  CHECK(exact_binom(-1, 4) == 1);
}

TEST_CASE("binom_nu agrees with exact coefficients and carry counts") {
  std::mt19937 rng(20260823);
  std::uniform_int_distribution<long long> dist(0, 600);
  for (int trial = 0; trial < 2000; ++trial) {
    long long a = dist(rng), b = dist(rng);
    long long m = std::max(a, b), n = std::min(a, b);
    Valuation v = binom_nu(m, n);
    REQUIRE_FALSE(v.is_infinite);
    CHECK(v.value == nu(exact_binom(m, n)));
    // carry count of n + (m-n) in base 2
    long long x = n, y = m - n, carry = 0, carries = 0;
    for (int bit = 0; bit < 12; ++bit) {
      long long s = ((x >> bit) & 1) + ((y >> bit) & 1) + carry;
      carry = s >> 1;
      carries += carry;
    }
    CHECK(v.value == carries);
  }
}

TEST_CASE("negative top is the 2^L - k convention") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<long long> dist(1, 64);
  const long long L = 1LL << 20;
  for (int trial = 0; trial < 200; ++trial) {
    long long k = dist(rng), n = dist(rng);
    Valuation v = binom_nu(-k, n);
    REQUIRE_FALSE(v.is_infinite);
    CHECK(v.value == nu(exact_binom(L - k, n)));
  }
}

TEST_CASE("Vandermonde collapse") {
  CHECK(vandermonde_lhs(1, 3) == -10);  // = C(-3,3)
  CHECK(vandermonde_lhs(0, 5) == exact_binom(-5, 5));
  std::mt19937 rng(7);
  std::uniform_int_distribution<long long> mdist(1, 1 << 12);
  for (int trial = 0; trial < 30; ++trial) {
    long long M = mdist(rng);
    for (long long h = 0; h <= 6; ++h) CHECK(vandermonde_lhs(h, M) == exact_binom(-M, M));
  }
  CHECK_THROWS_AS(vandermonde_lhs(-1, 3), std::invalid_argument);
  CHECK_THROWS_AS(vandermonde_lhs(2, 0), std::invalid_argument);
}
