#include "prime_matrix_builder.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>

#include "arithmetic.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace detsieve {

namespace {

i128 floor_div_128(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div_128(i128 a, i128 b) { return -floor_div_128(-a, b); }

std::int64_t gcd_all(const std::vector<std::int64_t>& xs, std::int64_t extra = 0) {
  std::int64_t g = extra < 0 ? -extra : extra;
  for (std::int64_t x : xs) g = std::gcd(g, x);
  return g;
}

struct SolveBudget {
  std::int64_t limit;
  std::int64_t used = 0;
  void charge(std::int64_t k = 1) {
    used += k;
    if (used > limit) throw BudgetError("prime solution search exceeded the visit budget");
  }
};

std::vector<std::int64_t> signed_coefficients(const LinearPrimeEquation& eq) {
  std::vector<std::int64_t> c(eq.A.A.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (eq.A.A[j] == 0) throw ValidationError("every equation coefficient must be nonzero");
    c[j] = (j % 2 == 0) ? eq.A.A[j] : -eq.A.A[j];
  }
  return c;
}

}  // namespace

MinorVector minors(const PartialFrame& frame) {
  const int n = frame.n;
  validate_dimension(n);
  if (frame.rows.rows() != n - 1 || frame.rows.cols() != n)
    throw ValidationError("a frame must have one row fewer than its column count");
  MinorVector out;
  out.A.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Mat sub(n - 1, n - 1);
    for (int col = 0, dst = 0; col < n; ++col) {
      if (col == j) continue;
      sub.col(dst++) = frame.rows.col(col);
    }
    i128 d = (n == 2) ? static_cast<i128>(sub(0, 0)) : det_exact(sub);
    if (d > std::numeric_limits<std::int64_t>::max() ||
        d < std::numeric_limits<std::int64_t>::min())
      throw BudgetError("frame minor does not fit a 64-bit integer");
    out.A[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(d);
  }
  return out;
}

FrameCheck check_frame(const PartialFrame& frame) {
  const int n = frame.n;
  validate_dimension(n);
  FrameCheck res;
  for (int i = 0; i < frame.rows.rows(); ++i)
    for (int j = 0; j < frame.rows.cols(); ++j) {
      std::int64_t e = frame.rows(i, j);
      if (e < 2 || !is_prime(e)) {
        res.detail = "entry (" + std::to_string(i) + "," + std::to_string(j) +
                     ") is not a positive prime";
        return res;
      }
    }
  MinorVector mv = minors(frame);
  const std::int64_t want_gcd = std::int64_t{1} << (n - 2);
  const std::int64_t want_mod = std::int64_t{1} << (n - 1);
  i128 sum = 0;
  for (std::size_t j = 0; j < mv.A.size(); ++j) {
    if (mv.A[j] == 0) {
      res.detail = "minor " + std::to_string(j + 1) + " vanishes";
      return res;
    }
    sum += mv.A[j];
  }
  std::int64_t g = gcd_all(mv.A);
  if (g != want_gcd) {
    res.detail = "minor gcd is " + std::to_string(g) + ", expected " + std::to_string(want_gcd);
    return res;
  }
  if (sum % want_mod != 0) {
    res.detail = "minor sum is not divisible by " + std::to_string(want_mod);
    return res;
  }
  res.ok = true;
  return res;
}

namespace frame_detail {

std::vector<int> xi_residue_classes(const std::vector<std::int64_t>& C, int n) {
  if (n < 3 || static_cast<int>(C.size()) != n - 1)
    throw ValidationError("residue classes need one trailing-block minor per row label");
  const int shift = n - 3;
  std::vector<std::int64_t> Cp(C.size());
  for (std::size_t idx = 0; idx < C.size(); ++idx) {
    std::int64_t mask = (std::int64_t{1} << shift) - 1;
    if (C[idx] == 0 || (C[idx] & mask) != 0)
      throw ValidationError("trailing-block minors must be nonzero with the expected 2-part");
    Cp[idx] = C[idx] >> shift;
  }
  // row labels run 2..n; sigma_j = (-1)^j
  auto sigma = [](std::size_t idx) { return (idx % 2 == 0) ? 1 : -1; };
  std::vector<std::size_t> odd_positions;
  std::int64_t even_sum = 0;
  for (std::size_t idx = 0; idx < Cp.size(); ++idx) {
    if (Cp[idx] % 2 != 0)
      odd_positions.push_back(idx);
    else
      even_sum += sigma(idx) * (Cp[idx] % 4);
  }
  if (odd_positions.empty() || odd_positions.size() % 2 != 0)
    throw ValidationError("trailing-block minors have the wrong parity pattern");
  const int b = static_cast<int>((((2 - even_sum) % 4) + 4) % 4);
  std::vector<int> classes(Cp.size(), 1);
  for (std::size_t k = 0; k < odd_positions.size(); ++k) {
    std::size_t idx = odd_positions[k];
    int eps = static_cast<int>(((sigma(idx) * Cp[idx]) % 4 + 4) % 4);
    int eta;
    if (b == 0)
      eta = (k % 2 == 0) ? 1 : 3;
    else if (k < 2)
      eta = 1;
    else
      eta = (k % 2 == 0) ? 1 : 3;
    classes[idx] = (eps * eta) % 4;
  }
  return classes;
}

std::vector<std::int64_t> first_nonvanishing_tuple(const std::vector<std::int64_t>& C,
                                                   std::int64_t p) {
  if (p < 3 || !is_prime(p)) throw ValidationError("tuple search needs an odd prime modulus");
  const std::size_t k = C.size();
  std::vector<std::int64_t> t(k, 1);
  auto weighted = [&]() {
    std::int64_t acc = 0;
    for (std::size_t idx = 0; idx < k; ++idx) {
      std::int64_t sgn = (idx % 2 == 0) ? 1 : -1;
      acc = ((acc + sgn * ((static_cast<i128>(t[idx]) * C[idx]) % p)) % p + p) % p;
    }
    return acc;
  };
  while (true) {
    if (weighted() != 0) return t;
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (t[pos] < p - 1) {
        ++t[pos];
        for (std::size_t z = pos + 1; z < k; ++z) t[z] = 1;
        break;
      }
      if (pos == 0) throw SearchExhausted("no tuple avoids the modulus, the minors all vanish");
    }
  }
}

std::int64_t pick_aux_prime(const std::vector<std::int64_t>& avoid_divisors,
                            const std::vector<std::int64_t>& avoid_values) {
  for (std::int64_t q = 3;; q += 2) {
    if (!is_prime(q)) continue;
    bool bad = false;
    for (std::int64_t v : avoid_divisors)
      if (v % q == 0) bad = true;
    for (std::int64_t v : avoid_values)
      if (v == q) bad = true;
    if (!bad) return q;
  }
}

}  // namespace frame_detail

namespace {

struct FrameKnobs {
  std::int64_t w_prime_bound = 200;
  int pick_range = 12;
  std::int64_t odd_part_start = 64;
  int rejects_per_doubling = 256;
};

// primes congruent to 1 and 3 mod 4, used as residue-class pick tables
const std::array<std::int64_t, 12> kPrimes1Mod4 = {5,  13, 17, 29, 37, 41,
                                                   53, 61, 73, 89, 97, 101};
const std::array<std::int64_t, 12> kPrimes3Mod4 = {3,  7,  11, 19, 23, 31,
                                                   43, 47, 59, 67, 71, 79};

std::int64_t pick_class_prime(int cls, std::mt19937_64& rng, int range) {
  const auto& table = (cls == 1) ? kPrimes1Mod4 : kPrimes3Mod4;
  return table[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(
                   std::min<int>(range, static_cast<int>(table.size()))))];
}

std::vector<std::int64_t> odd_prime_table(std::int64_t bound) {
  std::vector<std::int64_t> t = primes_up_to(bound);
  t.erase(std::remove(t.begin(), t.end(), 2), t.end());
  return t;
}

PartialFrame build_frame2(std::mt19937_64& rng) {
  std::vector<std::int64_t> table = odd_prime_table(200);
  std::int64_t p = table[rng() % table.size()];
  std::int64_t q = p;
  while (q == p) q = table[rng() % table.size()];
  PartialFrame f;
  f.n = 2;
  f.rows.resize(1, 2);
  f.rows << p, q;
  return f;
}

// columns are [z xi w]; row i carries label i+2
PartialFrame build_frame3(std::mt19937_64& rng, std::int64_t search_bound,
                          const FrameKnobs& knobs) {
  std::vector<std::int64_t> wtable = odd_prime_table(knobs.w_prime_bound);
  std::int64_t threshold = knobs.odd_part_start;
  int rejects = 0;
  for (int rounds = 0; rounds < (1 << 20); ++rounds) {
    std::int64_t w2 = wtable[rng() % wtable.size()];
    std::int64_t w3 = w2;
    while (w3 == w2) w3 = wtable[rng() % wtable.size()];
    std::vector<int> classes = frame_detail::xi_residue_classes({w3, w2}, 3);
    std::int64_t xi2 = pick_class_prime(classes[0], rng, knobs.pick_range);
    std::int64_t xi3 = pick_class_prime(classes[1], rng, knobs.pick_range);
    std::int64_t A1 = xi2 * w3 - xi3 * w2;
    bool accept = false;
    if (A1 != 0 && std::abs(A1) % 4 == 2) {
      std::int64_t u = std::abs(A1) / 2;
      accept = (u <= threshold);
    }
    if (!accept) {
      if (++rejects % knobs.rejects_per_doubling == 0)
        threshold = std::min<std::int64_t>(threshold * 2, std::int64_t{1} << 40);
      continue;
    }
    std::int64_t u = std::abs(A1) / 2;
    FactorMultiset fac = factor(u);
    std::int64_t q3 = frame_detail::pick_aux_prime({A1}, {w2, w3});
    std::vector<std::vector<std::int64_t>> targets;  // one tuple per odd prime divisor
    std::vector<std::int64_t> odd_divisors;
    for (const auto& [p, e] : fac.prime_powers) {
      odd_divisors.push_back(p);
      targets.push_back(frame_detail::first_nonvanishing_tuple({w3, w2}, p));
    }
    const std::int64_t xis[2] = {xi2, xi3};
    const std::int64_t ws[2] = {w2, w3};
    std::int64_t zs[2];
    bool drew = true;
    for (int i = 0; i < 2 && drew; ++i) {
      std::vector<std::pair<std::int64_t, std::int64_t>> congs;
      congs.emplace_back(xis[i] % 4, 4);
      congs.emplace_back(ws[i] % q3, q3);
      for (std::size_t d = 0; d < odd_divisors.size(); ++d)
        congs.emplace_back(targets[d][static_cast<std::size_t>(i)], odd_divisors[d]);
      auto [r, M] = crt(congs);
      try {
        zs[i] = kth_prime_in_ap(r, M, static_cast<int>(rng() % knobs.pick_range), search_bound,
                                std::int64_t{1} << 40);
      } catch (const SearchExhausted&) {
        drew = false;
      }
    }
    if (!drew) continue;
    PartialFrame f;
    f.n = 3;
    f.rows.resize(2, 3);
    f.rows << zs[0], xi2, w2, zs[1], xi3, w3;
    if (check_frame(f).ok) return f;
  }
  throw SearchExhausted("frame search did not converge; the draw space looks miscalibrated");
}

PartialFrame build_frame4(std::mt19937_64& rng, std::int64_t search_bound) {
  FrameKnobs small;
  small.w_prime_bound = 60;
  small.odd_part_start = 16;
  std::int64_t rad_cap = 10'000;
  for (int rebuild = 0; rebuild < 64; ++rebuild, rad_cap = std::min<std::int64_t>(rad_cap * 2, 1'000'000)) {
    PartialFrame sub = build_frame3(rng, search_bound, small);
    std::vector<std::int64_t> C;
    try {
      C = minors(sub).A;
    } catch (const BudgetError&) {
      continue;
    }
    std::vector<int> classes = frame_detail::xi_residue_classes(C, 4);
    for (int draw = 0; draw < 4096; ++draw) {
      std::int64_t xi[3];
      for (int i = 0; i < 3; ++i) xi[i] = pick_class_prime(classes[i], rng, 16);
      i128 A1w = 0;
      for (int i = 0; i < 3; ++i) {
        std::int64_t sgn = (i % 2 == 0) ? 1 : -1;
        A1w += static_cast<i128>(sgn) * xi[i] * C[static_cast<std::size_t>(i)];
      }
      if (A1w == 0 || A1w > std::numeric_limits<std::int64_t>::max() ||
          A1w < std::numeric_limits<std::int64_t>::min())
        continue;
      std::int64_t A1 = static_cast<std::int64_t>(A1w);
      if (std::abs(A1) % 8 != 4) continue;
      std::int64_t u = std::abs(A1) / 4;
      FactorMultiset fac = factor(u);
      i128 rad = 1;
      for (const auto& [p, e] : fac.prime_powers) rad *= p;
      if (rad > rad_cap) continue;
      std::vector<std::int64_t> wvals;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) wvals.push_back(sub.rows(i, j));
      std::int64_t q3 = frame_detail::pick_aux_prime({A1}, wvals);
      wvals.push_back(q3);
      std::int64_t q4 = frame_detail::pick_aux_prime({A1}, wvals);
      std::vector<std::vector<std::int64_t>> targets;
      std::vector<std::int64_t> odd_divisors;
      for (const auto& [p, e] : fac.prime_powers) {
        odd_divisors.push_back(p);
        targets.push_back(frame_detail::first_nonvanishing_tuple(C, p));
      }
      // the trailing block is the transpose of the three-column frame
      std::int64_t zrow[3];
      bool drew = true;
      for (int i = 0; i < 3 && drew; ++i) {
        std::vector<std::pair<std::int64_t, std::int64_t>> congs;
        congs.emplace_back(xi[i] % 8, 8);
        congs.emplace_back(sub.rows(0, i) % q3, q3);
        congs.emplace_back(sub.rows(1, i) % q4, q4);
        for (std::size_t d = 0; d < odd_divisors.size(); ++d)
          congs.emplace_back(targets[d][static_cast<std::size_t>(i)], odd_divisors[d]);
        auto [r, M] = crt(congs);
        try {
          zrow[i] = kth_prime_in_ap(r, M, static_cast<int>(rng() % 4), search_bound,
                                    std::int64_t{1} << 40);
        } catch (const SearchExhausted&) {
          drew = false;
        }
      }
      if (!drew) continue;
      PartialFrame f;
      f.n = 4;
      f.rows.resize(3, 4);
      for (int i = 0; i < 3; ++i) {
        f.rows(i, 0) = zrow[i];
        f.rows(i, 1) = xi[i];
        f.rows(i, 2) = sub.rows(0, i);
        f.rows(i, 3) = sub.rows(1, i);
      }
      try {
        if (check_frame(f).ok) return f;
      } catch (const BudgetError&) {
      }
    }
  }
  throw SearchExhausted("no trailing block with a small enough radical turned up");
}

}  // namespace

PartialFrame build_frame(int n, std::uint64_t seed, std::int64_t search_bound) {
  validate_dimension(n);
  if (search_bound < 1024) throw ValidationError("the column prime search bound is too small");
  std::mt19937_64 rng(seed);
  if (n == 2) return build_frame2(rng);
  if (n == 3) return build_frame3(rng, search_bound, FrameKnobs{});
  return build_frame4(rng, search_bound);
}

bool vinogradov_local_check(std::int64_t A0, const MinorVector& A) {
  const std::size_t n = A.A.size();
  if (n < 2) throw ValidationError("the local check needs at least two coefficients");
  for (std::int64_t a : A.A)
    if (a == 0) return false;
  std::vector<std::int64_t> head(A.A.begin(), A.A.end() - 1);
  std::vector<std::int64_t> head_swapped(A.A.begin(), A.A.end());
  head_swapped.erase(head_swapped.end() - 2);
  std::int64_t g1 = gcd_all(head, A0);
  std::int64_t g2 = gcd_all(head_swapped, A0);
  std::int64_t g3 = gcd_all(A.A);
  std::int64_t g4 = gcd_all(A.A, A0);
  if (!(g1 == g2 && g2 == g3 && g3 == g4)) return false;
  i128 total = A0;
  for (std::int64_t a : A.A) total += a;
  return total % (2 * static_cast<i128>(g4)) == 0;
}

namespace {

// c1 x + c2 y = B with |c1| <= |c2|; walks x over its admissible residue class
bool pair_solve(std::int64_t c1, std::int64_t c2, i128 B, std::int64_t T, SolveBudget& budget,
                std::int64_t& x_out, std::int64_t& y_out) {
  const std::int64_t a1 = std::abs(c1), a2 = std::abs(c2);
  const std::int64_t g = std::gcd(a1, a2);
  if (B % g != 0) return false;
  const std::int64_t m = a2 / g;
  // x window induced by y in [2, T]
  i128 lo_num, hi_num;
  if (c2 > 0) {
    lo_num = B - static_cast<i128>(c2) * T;
    hi_num = B - static_cast<i128>(c2) * 2;
  } else {
    lo_num = B - static_cast<i128>(c2) * 2;
    hi_num = B - static_cast<i128>(c2) * T;
  }
  i128 xlo128, xhi128;
  if (c1 > 0) {
    xlo128 = ceil_div_128(lo_num, c1);
    xhi128 = floor_div_128(hi_num, c1);
  } else {
    xlo128 = ceil_div_128(hi_num, c1);
    xhi128 = floor_div_128(lo_num, c1);
  }
  std::int64_t xlo = static_cast<std::int64_t>(std::max<i128>(xlo128, 2));
  std::int64_t xhi = static_cast<std::int64_t>(std::min<i128>(xhi128, T));
  if (xlo > xhi) return false;
  std::int64_t x0 = xlo;
  std::int64_t step = 1;
  if (m > 1) {
    std::int64_t c1r = ((c1 / g) % m + m) % m;
    std::int64_t Br = static_cast<std::int64_t>(((B / g) % m + m) % m);
    std::int64_t r = static_cast<std::int64_t>(internal::mulmod(
        static_cast<std::uint64_t>(Br), static_cast<std::uint64_t>(internal::inv_mod(c1r, m)),
        static_cast<std::uint64_t>(m)));
    std::int64_t delta = ((r - xlo) % m + m) % m;
    x0 = xlo + delta;
    step = m;
  }
  for (std::int64_t x = x0; x <= xhi; x += step) {
    budget.charge();
    if (!is_prime(x)) continue;
    i128 rem = B - static_cast<i128>(c1) * x;
    i128 y = rem / c2;
    if (rem % c2 != 0) continue;
    if (y < 2 || y > T) continue;
    std::int64_t y64 = static_cast<std::int64_t>(y);
    if (is_prime(y64)) {
      x_out = x;
      y_out = y64;
      return true;
    }
  }
  return false;
}

std::vector<std::size_t> order_by_magnitude(const std::vector<std::int64_t>& c) {
  std::vector<std::size_t> idx(c.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    std::int64_t va = std::abs(c[a]), vb = std::abs(c[b]);
    return va != vb ? va < vb : a < b;
  });
  return idx;
}

std::optional<std::vector<std::int64_t>> find_solution(const std::vector<std::int64_t>& c,
                                                       std::int64_t A0, std::int64_t T,
                                                       const std::vector<std::int64_t>& primes,
                                                       SolveBudget& budget) {
  const std::size_t n = c.size();
  std::vector<std::size_t> idx = order_by_magnitude(c);
  std::vector<std::int64_t> s(n, 0);
  if (n == 3) {
    for (std::int64_t s0 : primes) {
      if (s0 > T) break;
      budget.charge();
      i128 B = static_cast<i128>(A0) - static_cast<i128>(c[idx[0]]) * s0;
      std::int64_t x, y;
      if (pair_solve(c[idx[1]], c[idx[2]], B, T, budget, x, y)) {
        s[idx[0]] = s0;
        s[idx[1]] = x;
        s[idx[2]] = y;
        return s;
      }
    }
    return std::nullopt;
  }
  // n == 4: two outer prime loops over the small coefficients, window on the rest
  auto span = [&](std::size_t j) {
    i128 lo = static_cast<i128>(c[j]) * (c[j] > 0 ? 2 : T);
    i128 hi = static_cast<i128>(c[j]) * (c[j] > 0 ? T : 2);
    return std::pair<i128, i128>(lo, hi);
  };
  auto [lo1, hi1] = span(idx[1]);
  auto [lo2, hi2] = span(idx[2]);
  auto [lo3, hi3] = span(idx[3]);
  for (std::int64_t s0 : primes) {
    if (s0 > T) break;
    budget.charge();
    i128 B0 = static_cast<i128>(A0) - static_cast<i128>(c[idx[0]]) * s0;
    if (B0 < lo1 + lo2 + lo3 || B0 > hi1 + hi2 + hi3) continue;
    for (std::int64_t s1 : primes) {
      if (s1 > T) break;
      budget.charge();
      i128 B1 = B0 - static_cast<i128>(c[idx[1]]) * s1;
      if (B1 < lo2 + lo3 || B1 > hi2 + hi3) continue;
      std::int64_t x, y;
      if (pair_solve(c[idx[2]], c[idx[3]], B1, T, budget, x, y)) {
        s[idx[0]] = s0;
        s[idx[1]] = s1;
        s[idx[2]] = x;
        s[idx[3]] = y;
        return s;
      }
    }
  }
  return std::nullopt;
}

void validate_equation(const LinearPrimeEquation& eq) {
  const std::size_t n = eq.A.A.size();
  if (n != 3 && n != 4)
    throw ValidationError("the prime solver handles equations with three or four unknowns");
  for (std::int64_t a : eq.A.A)
    if (a == 0) throw ValidationError("every minor must be nonzero");
}

}  // namespace

std::vector<std::vector<std::int64_t>> solve_prime_equation(const LinearPrimeEquation& eq,
                                                            std::int64_t T,
                                                            const EnumBudget& budget) {
  validate_equation(eq);
  if (T < 2) throw ValidationError("the solution threshold must be at least 2");
  if (T > (std::int64_t{1} << 31)) throw ValidationError("threshold too large for the solver sieve");
  const std::vector<std::int64_t> c = signed_coefficients(eq);
  const std::size_t n = c.size();
  const std::vector<std::int64_t> primes = primes_up_to(T);
  SolveBudget sb{budget.max_visits};
  std::vector<std::vector<std::int64_t>> out;
  const std::int64_t clast = c[n - 1];
  std::vector<std::int64_t> s(n, 0);
  // lexicographic enumeration: the last coordinate is pinned by the prefix
  std::function<void(std::size_t, i128)> rec = [&](std::size_t pos, i128 partial) {
    if (pos == n - 1) {
      sb.charge();
      i128 rhs = static_cast<i128>(eq.A0) - partial;
      if (rhs % clast != 0) return;
      i128 v = rhs / clast;
      if (v < 2 || v > T) return;
      std::int64_t v64 = static_cast<std::int64_t>(v);
      if (!is_prime(v64)) return;
      s[pos] = v64;
      out.push_back(s);
      return;
    }
    for (std::int64_t p : primes) {
      s[pos] = p;
      rec(pos + 1, partial + static_cast<i128>(c[pos]) * p);
    }
  };
  rec(0, 0);
  return out;
}

std::vector<SolutionSeriesRow> count_solutions_series(const LinearPrimeEquation& eq,
                                                      const std::vector<std::int64_t>& grid,
                                                      const EnumBudget& budget) {
  validate_equation(eq);
  if (grid.empty()) throw ValidationError("the threshold grid must not be empty");
  std::vector<std::int64_t> ts = grid;
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  if (ts.front() < 3) throw ValidationError("thresholds below 3 cannot carry prime solutions");
  const std::int64_t tmax = ts.back();
  std::vector<std::vector<std::int64_t>> sols = solve_prime_equation(eq, tmax, budget);
  std::vector<SolutionSeriesRow> rows;
  const auto n = static_cast<double>(eq.A.A.size());
  for (std::int64_t T : ts) {
    std::int64_t count = 0;
    for (const auto& s : sols)
      if (*std::max_element(s.begin(), s.end()) <= T) ++count;
    SolutionSeriesRow row;
    row.T = T;
    row.count = count;
    row.normalized = static_cast<double>(count) * std::pow(std::log(static_cast<double>(T)), n) /
                     std::pow(static_cast<double>(T), n - 1.0);
    rows.push_back(row);
  }
  return rows;
}

BuildResult build_prime_matrix(int n, std::uint64_t seed, const BuildOptions& opts) {
  validate_dimension(n);
  if (n == 2)
    throw ValidationError(
        "determinant 2 with two prime unknowns reduces to a binary prime equation; the linear "
        "solution step needs at least three variables");
  if (n == 4 && !opts.allow_n4)
    throw ValidationError("four-dimensional builds are disabled unless explicitly allowed");
  const std::int64_t A0 = std::int64_t{1} << (n - 1);
  std::mt19937_64 seeder(seed);
  for (int attempt = 0; attempt < opts.max_frame_attempts; ++attempt) {
    PartialFrame frame = build_frame(n, seeder(), opts.search_bound);
    MinorVector mv = minors(frame);
    LinearPrimeEquation eq{A0, mv};
    std::vector<std::int64_t> c = signed_coefficients(eq);
    const bool all_pos = std::all_of(c.begin(), c.end(), [](std::int64_t v) { return v > 0; });
    const bool all_neg = std::all_of(c.begin(), c.end(), [](std::int64_t v) { return v < 0; });
    // with every sign equal the minimum attainable value already overshoots the target
    if (all_pos || all_neg) continue;
    if (!vinogradov_local_check(A0, mv)) continue;
    SolveBudget sb{opts.solver_visit_budget};
    for (std::int64_t T = opts.solver_T_start; T <= opts.solver_T_cap; T *= 2) {
      std::vector<std::int64_t> primes = primes_up_to(T);
      std::optional<std::vector<std::int64_t>> sol = find_solution(c, A0, T, primes, sb);
      if (!sol) continue;
      BuildResult res;
      res.frame = frame;
      res.eq = eq;
      res.top_row = *sol;
      res.solver_T = T;
      res.frame_attempts = attempt + 1;
      res.x.resize(n, n);
      for (int j = 0; j < n; ++j) res.x(0, j) = (*sol)[static_cast<std::size_t>(j)];
      for (int i = 1; i < n; ++i)
        for (int j = 0; j < n; ++j) res.x(i, j) = frame.rows(i - 1, j);
      if (det_exact(res.x) != A0) throw std::logic_error("assembled determinant is off");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (!is_prime(res.x(i, j))) throw std::logic_error("assembled entry is not prime");
      return res;
    }
  }
  throw SearchExhausted(
      "no prime solution within the frame and level budgets; raise the caps or try another seed");
}

bool necessity_check(const Mat& x) {
  if (x.rows() != x.cols()) throw ValidationError("the obstruction check needs a square matrix");
  const int n = static_cast<int>(x.rows());
  validate_dimension(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (x(i, j) % 2 == 0) return true;
  const std::int64_t mod = std::int64_t{1} << (n - 1);
  return det_exact(x) % mod == 0;
}

}  // namespace detsieve
