#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace detsieve {

// factorization of |k| as (prime, exponent) pairs with primes strictly increasing
struct FactorMultiset {
  std::vector<std::pair<std::int64_t, int>> prime_powers;
};

// deterministic Miller-Rabin over the full signed 64-bit range; |k| is tested
bool is_prime(std::int64_t k);

FactorMultiset factor(std::int64_t k);

// number of prime factors counted with multiplicity; 0 for |k| = 1
int omega_count(std::int64_t k);

// ascending primes p <= bound with p = a (mod q); requires gcd(a mod q, q) = 1
std::vector<std::int64_t> primes_in_ap(std::int64_t a, std::int64_t q, std::int64_t bound);

// simultaneous congruences with pairwise coprime moduli; returns (x, lcm), 0 <= x < lcm
std::pair<std::int64_t, std::int64_t> crt(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& congruences);

int moebius(std::int64_t d);

std::vector<std::int64_t> primes_up_to(std::int64_t bound);

// (k+1)-th prime = a (mod q), scanning forward with the bound doubling from
// initial_bound up to hard_cap before giving up
std::int64_t kth_prime_in_ap(std::int64_t a, std::int64_t q, int k,
                             std::int64_t initial_bound, std::int64_t hard_cap);

namespace internal {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// returns (u, v) with a*u + b*v = g, g = gcd(|a|, |b|) stored through out-param
std::pair<std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& g);

// inverse of a mod m for gcd(a, m) = 1, result in [0, m)
std::int64_t inv_mod(std::int64_t a, std::int64_t m);

}  // namespace internal

}  // namespace detsieve
