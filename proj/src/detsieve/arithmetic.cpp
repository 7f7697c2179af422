#include "arithmetic.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "errors.hpp"
#include "rational.hpp"

namespace detsieve {

std::string i128_to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::string Rational::to_string() const {
  if (den_ == 1) return i128_to_string(num_);
  return i128_to_string(num_) + "/" + i128_to_string(den_);
}

namespace internal {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

std::pair<std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& g) {
  // iterative extended Euclid on the signed values
  std::int64_t old_r = a, r = b;
  std::int64_t old_s = 1, s = 0;
  std::int64_t old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  g = old_r;
  return {old_s, old_t};
}

std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = 0;
  a = ((a % m) + m) % m;
  auto [u, v] = ext_gcd(a, m, g);
  (void)v;
  if (g != 1) throw ValidationError("inverse does not exist: gcd != 1");
  return ((u % m) + m) % m;
}

}  // namespace internal

namespace {

bool miller_rabin(std::uint64_t n) {
  // n odd, n > 37, not divisible by the witness primes
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // this witness set decides primality for every 64-bit integer
  constexpr std::uint64_t witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t a : witnesses) {
    std::uint64_t x = internal::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = internal::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t abs_u64(std::int64_t k) {
  return k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
}

std::uint64_t pollard_rho(std::uint64_t n) {
  // Brent's cycle variant with deterministic parameter escalation
  if ((n & 1) == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t x = 2, y = 2, d = 1, q = 1;
    std::uint64_t ys = y;
    const int m = 128;
    int r = 1;
    auto f = [&](std::uint64_t v) {
      return (internal::mulmod(v, v, n) + c) % n;
    };
    while (d == 1) {
      x = y;
      for (int i = 0; i < r; ++i) y = f(y);
      int k = 0;
      while (k < r && d == 1) {
        ys = y;
        int lim = std::min(m, r - k);
        for (int i = 0; i < lim; ++i) {
          y = f(y);
          q = internal::mulmod(q, x > y ? x - y : y - x, n);
        }
        d = std::gcd(q, n);
        k += m;
      }
      r <<= 1;
      if (r > (1 << 24)) break;
    }
    if (d == n) {
      // backtrack one step at a time
      d = 1;
      while (d == 1) {
        ys = f(ys);
        d = std::gcd(x > ys ? x - ys : ys - x, n);
      }
    }
    if (d != n && d != 1) return d;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (miller_rabin(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

bool is_prime(std::int64_t k) {
  std::uint64_t n = abs_u64(k);
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                          31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 41 * 41) return true;
  return miller_rabin(n);
}

FactorMultiset factor(std::int64_t k) {
  if (k == 0) throw ValidationError("factor: zero has no factorization");
  std::uint64_t n = abs_u64(k);
  FactorMultiset fm;
  if (n == 1) return fm;

  std::vector<std::uint64_t> primes;
  // strip small primes by trial division, then split the remainder
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                          31ull, 37ull, 41ull, 43ull, 47ull}) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  for (std::uint64_t p = 53; p * p <= n && p < 100000; p += 2) {
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) factor_into(n, primes);

  std::sort(primes.begin(), primes.end());
  for (std::uint64_t p : primes) {
    if (!fm.prime_powers.empty() &&
        fm.prime_powers.back().first == static_cast<std::int64_t>(p)) {
      ++fm.prime_powers.back().second;
    } else {
      fm.prime_powers.push_back({static_cast<std::int64_t>(p), 1});
    }
  }
  return fm;
}

int omega_count(std::int64_t k) {
  FactorMultiset fm = factor(k);
  int total = 0;
  for (auto& [p, e] : fm.prime_powers) total += e;
  return total;
}

std::vector<std::int64_t> primes_in_ap(std::int64_t a, std::int64_t q, std::int64_t bound) {
  if (q < 1) throw ValidationError("primes_in_ap: modulus must be positive");
  std::int64_t r = ((a % q) + q) % q;
  if (std::gcd(r, q) != 1) {
    throw ValidationError("primes_in_ap: residue " + std::to_string(r) + " not coprime to " +
                          std::to_string(q));
  }
  std::vector<std::int64_t> out;
  for (std::int64_t x = r; x <= bound; x += q) {
    if (x >= 2 && is_prime(x)) out.push_back(x);
  }
  return out;
}

std::pair<std::int64_t, std::int64_t> crt(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& congruences) {
  i128 x = 0;
  i128 mod = 1;
  for (auto& [ri, mi] : congruences) {
    if (mi < 1) throw ValidationError("crt: modulus must be positive");
    i128 g = gcd128(mod, mi);
    if (g != 1) throw ValidationError("crt: moduli not pairwise coprime");
    // solve x + mod*t = ri (mod mi)
    std::int64_t mod_red = static_cast<std::int64_t>(mod % mi);
    std::int64_t rhs = static_cast<std::int64_t>((((ri - x) % mi) + mi) % mi);
    std::int64_t t = static_cast<std::int64_t>(
        (static_cast<i128>(internal::inv_mod(mod_red, mi)) * rhs) % mi);
    x = x + mod * t;
    mod = Rational::checked_mul(mod, mi);
    x %= mod;
    if (x < 0) x += mod;
  }
  if (mod > INT64_MAX) throw BudgetError("crt: combined modulus exceeds 64 bits");
  return {static_cast<std::int64_t>(x), static_cast<std::int64_t>(mod)};
}

int moebius(std::int64_t d) {
  if (d < 1) throw ValidationError("moebius: argument must be positive");
  FactorMultiset fm = factor(d);
  int k = 0;
  for (auto& [p, e] : fm.prime_powers) {
    if (e > 1) return 0;
    ++k;
  }
  return (k % 2 == 0) ? 1 : -1;
}

std::vector<std::int64_t> primes_up_to(std::int64_t bound) {
  std::vector<std::int64_t> out;
  if (bound < 2) return out;
  std::vector<char> sieve(static_cast<std::size_t>(bound) + 1, 1);
  sieve[0] = sieve[1] = 0;
  for (std::int64_t i = 2; i * i <= bound; ++i) {
    if (!sieve[static_cast<std::size_t>(i)]) continue;
    for (std::int64_t j = i * i; j <= bound; j += i) sieve[static_cast<std::size_t>(j)] = 0;
  }
  for (std::int64_t i = 2; i <= bound; ++i) {
    if (sieve[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

std::int64_t kth_prime_in_ap(std::int64_t a, std::int64_t q, int k,
                             std::int64_t initial_bound, std::int64_t hard_cap) {
  if (q < 1) throw ValidationError("kth_prime_in_ap: modulus must be positive");
  if (k < 0) throw ValidationError("kth_prime_in_ap: negative index");
  std::int64_t r = ((a % q) + q) % q;
  if (std::gcd(r, q) != 1) throw ValidationError("kth_prime_in_ap: residue not coprime to modulus");
  std::int64_t bound = std::max<std::int64_t>(initial_bound, q + 2);
  std::int64_t x = r;
  if (x < 2) x += q;
  int seen = 0;
  while (true) {
    for (; x <= bound; x += q) {
      if (is_prime(x)) {
        if (seen == k) return x;
        ++seen;
      }
    }
    if (bound >= hard_cap) {
      throw SearchExhausted("kth_prime_in_ap: no prime = " + std::to_string(r) + " (mod " +
                            std::to_string(q) + ") at index " + std::to_string(k) +
                            " below cap " + std::to_string(hard_cap));
    }
    bound = std::min(hard_cap, bound * 2);
  }
}

}  // namespace detsieve
