#include "detsieve/arithmetic.hpp"

#include <random>

#include "detsieve/errors.hpp"
#include "detsieve/rational.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace detsieve;

TEST_CASE("primality agrees with trial division on a dense small range") {
  for (std::int64_t k = -3; k <= 2000; ++k) {
    CHECK(is_prime(k) == oracle::is_prime_trial(k));
  }
}

TEST_CASE("primality handles strong pseudoprime traps and large composites") {
  CHECK(!is_prime(561));         // Carmichael
  CHECK(!is_prime(3215031751));  // strong pseudoprime to bases 2, 3, 5, 7
  CHECK(oracle::is_prime_trial(3215031751) == false);
  CHECK(is_prime(1000003));
  CHECK(is_prime(1000033));
  CHECK(!is_prime(std::int64_t{1000003} * 1000033));
  CHECK(is_prime(-13));
  CHECK(!is_prime(1));
  CHECK(!is_prime(0));
}

TEST_CASE("factorization recombines to the input and keeps primes sorted") {
  CHECK(factor(1).prime_powers.empty());
  CHECK(factor(5184).prime_powers ==
        std::vector<std::pair<std::int64_t, int>>{{2, 6}, {3, 4}});
  CHECK(factor(-12).prime_powers ==
        std::vector<std::pair<std::int64_t, int>>{{2, 2}, {3, 1}});
  CHECK(factor(std::int64_t{1000003} * 1000033).prime_powers ==
        std::vector<std::pair<std::int64_t, int>>{{1000003, 1}, {1000033, 1}});

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::int64_t k = static_cast<std::int64_t>(rng() % 4'000'000) + 2;
    auto fm = factor(k);
    std::int64_t back = 1;
    std::int64_t prev = 1;
    for (auto [p, e] : fm.prime_powers) {
      CHECK(oracle::is_prime_trial(p));
      CHECK(p > prev);
      prev = p;
      for (int i = 0; i < e; ++i) back *= p;
    }
    CHECK(back == k);
  }
}

TEST_CASE("prime factor counting with multiplicity") {
  CHECK(omega_count(1) == 0);
  CHECK(omega_count(-1) == 0);
  CHECK(omega_count(12) == 3);
  CHECK(omega_count(13) == 1);
  CHECK(omega_count(64) == 6);
}

TEST_CASE("primes in arithmetic progression match a direct filter") {
  CHECK(primes_in_ap(1, 4, 100) ==
        std::vector<std::int64_t>{5, 13, 17, 29, 37, 41, 53, 61, 73, 89, 97});
  std::vector<std::int64_t> expect;
  for (std::int64_t p : oracle::primes_up_to_trial(500)) {
    if (p % 7 == 3) expect.push_back(p);
  }
  CHECK(primes_in_ap(3, 7, 500) == expect);
  CHECK_THROWS_AS(primes_in_ap(0, 2, 50), ValidationError);
  CHECK_THROWS_AS(primes_in_ap(6, 9, 50), ValidationError);
}

TEST_CASE("simultaneous congruences solve and reject non-coprime moduli") {
  auto [x, mod] = crt({{1, 4}, {3, 11}, {1, 7}});
  CHECK(x == 113);
  CHECK(mod == 308);
  auto [y, mod2] = crt({{5, 9}});
  CHECK(y == 5);
  CHECK(mod2 == 9);
  CHECK_THROWS_AS(crt({{1, 4}, {1, 2}}), ValidationError);
}

TEST_CASE("moebius values on small arguments") {
  CHECK(moebius(1) == 1);
  CHECK(moebius(2) == -1);
  CHECK(moebius(4) == 0);
  CHECK(moebius(6) == 1);
  CHECK(moebius(30) == -1);
  CHECK(moebius(210) == 1);
}

TEST_CASE("prime sieve lists agree with trial division") {
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(100) == oracle::primes_up_to_trial(100));
}

TEST_CASE("k-th prime in a progression scans forward deterministically") {
  CHECK(kth_prime_in_ap(113, 308, 0, 4096, 1 << 20) == 113);
  CHECK(kth_prime_in_ap(113, 308, 1, 4096, 1 << 20) == 421);
  CHECK(kth_prime_in_ap(225, 308, 0, 4096, 1 << 20) == 2381);
  CHECK_THROWS_AS(kth_prime_in_ap(0, 4, 0, 64, 1 << 12), ValidationError);
  // index far beyond what fits under the cap, so the doubling scan must give up
  CHECK_THROWS_AS(kth_prime_in_ap(1, 4, 1000, 64, 128), SearchExhausted);
}

TEST_CASE("exact fractions reduce, compare, and refuse zero denominators") {
  Rational r(6, -4);
  CHECK(r.num() == -3);
  CHECK(r.den() == 2);
  CHECK(r.to_string() == "-3/2");
  CHECK(Rational(4, 2).to_string() == "2");
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
  CHECK(Rational(5, 7) / Rational(10, 21) == Rational(3, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-5) < Rational(0));
  CHECK(Rational(7, 2).to_double() == doctest::Approx(3.5));
  CHECK_THROWS_AS(Rational(1, 0), ValidationError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), ValidationError);
}

TEST_CASE("fraction arithmetic flags 128-bit overflow instead of wrapping") {
  Rational big(i128{1} << 126);
  CHECK_THROWS_AS(big * big, BudgetError);
  CHECK_THROWS_AS(big + big, BudgetError);
}
