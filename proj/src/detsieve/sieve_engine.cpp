#include "sieve_engine.hpp"

#include <algorithm>
#include <cmath>

#include "arithmetic.hpp"
#include "errors.hpp"

namespace detsieve {

SiftSequence build_sequence(const Mat& v, const PolynomialOnV& f, const NormSpec& norm,
                            const EnumBudget& budget) {
  if (v.rows() != v.cols() || v.rows() != f.n) {
    throw ValidationError("base point and polynomial dimensions disagree");
  }
  const int n = f.n;
  i128 det = det_exact(v);
  if (det == 0) throw ValidationError("base point must be nonsingular");
  if (det < INT64_MIN || det > INT64_MAX) throw BudgetError("determinant overflows 64 bits");
  auto m = static_cast<std::int64_t>(det);
  if (m < 1) throw ValidationError("base point needs positive determinant");

  SiftSequence seq;
  seq.T = norm.T;
  OrbitDecomposition dec = hnf_orbit_reps(m, n);
  const bool single = dec.reps.size() == 1;
  const int home = single ? 0 : orbit_of(v, dec);
  enumerate_points(m, n, norm,
                   [&](const Mat& x) {
                     if (!single && orbit_of(x, dec) != home) return;
                     std::int64_t val = f.value(x);
                     std::int64_t k = val < 0 ? -val : val;
                     if (k == 0) {
                       ++seq.a0;
                     } else {
                       ++seq.a[k];
                       ++seq.X;
                     }
                   },
                   budget);
  return seq;
}

std::int64_t progression_sum(const SiftSequence& seq, std::int64_t d) {
  if (d < 1) throw ValidationError("progression modulus must be positive");
  std::int64_t s = 0;
  for (auto& [k, ak] : seq.a) {
    if (k % d == 0) s += ak;
  }
  return s;
}

Rational remainder_term(const SiftSequence& seq, std::int64_t d, const DensityTable& rho) {
  const Rational* r = rho.find(d);
  if (r == nullptr) throw ValidationError("density table has no entry for modulus " +
                                          std::to_string(d));
  return Rational(progression_sum(seq, d)) - (*r / Rational(d)) * Rational(seq.X);
}

namespace internal {

std::int64_t sift_moebius(const SiftSequence& seq, const std::vector<std::int64_t>& primes) {
  // inclusion-exclusion over squarefree products, pruned past the largest key
  std::int64_t max_k = seq.a.empty() ? 0 : seq.a.rbegin()->first;
  std::int64_t total = 0;
  auto dfs = [&](auto&& self, std::size_t idx, std::int64_t d, int sign) -> void {
    total += sign * progression_sum(seq, d);
    for (std::size_t i = idx; i < primes.size(); ++i) {
      if (primes[i] > max_k / std::max<std::int64_t>(d, 1)) break;
      self(self, i + 1, d * primes[i], -sign);
    }
  };
  dfs(dfs, 0, 1, 1);
  return total;
}

std::int64_t sift_direct(const SiftSequence& seq, const std::vector<std::int64_t>& primes) {
  std::int64_t total = 0;
  for (auto& [k, ak] : seq.a) {
    bool coprime = true;
    for (std::int64_t p : primes) {
      if (p > k) break;
      if (k % p == 0) {
        coprime = false;
        break;
      }
    }
    if (coprime) total += ak;
  }
  return total;
}

}  // namespace internal

std::int64_t legendre_sift(const SiftSequence& seq, double z,
                           const std::set<std::int64_t>& exempt) {
  if (z < 2.0) return seq.X;
  std::vector<std::int64_t> primes;
  for (std::int64_t p : primes_up_to(static_cast<std::int64_t>(std::floor(z + 1e-9)))) {
    if (exempt.count(p) == 0) primes.push_back(p);
  }
  if (primes.size() <= 20) return internal::sift_moebius(seq, primes);
  return internal::sift_direct(seq, primes);
}

std::vector<LevelScanRow> level_scan(const SiftSequence& seq, const DensityTable& rho,
                                     const std::vector<double>& D_grid) {
  if (D_grid.empty()) throw ValidationError("level scan needs a nonempty grid");
  std::vector<double> grid = D_grid;
  std::sort(grid.begin(), grid.end());
  std::vector<LevelScanRow> rows;
  for (double D : grid) {
    LevelScanRow row;
    row.D = D;
    auto top = static_cast<std::int64_t>(std::floor(D + 1e-9));
    double sum = 0;
    for (std::int64_t d = 1; d <= top; ++d) {
      if (moebius(d) == 0) continue;
      sum += std::abs(remainder_term(seq, d, rho).to_double());
    }
    row.remainder_sum = sum;
    row.ratio_to_mass = seq.X > 0 ? sum / static_cast<double>(seq.X) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::int64_t pi_count(std::int64_t m, int n, const std::vector<PolynomialOnV>& factors,
                      const NormSpec& norm, const EnumBudget& budget) {
  if (factors.empty()) throw ValidationError("prime-value count needs at least one factor");
  for (auto& f : factors) {
    if (f.n != n) throw ValidationError("factor dimension disagrees");
    if (f.degree() == 0) throw ValidationError("constant factors are not admissible");
  }
  std::int64_t count = 0;
  enumerate_points(m, n, norm,
                   [&](const Mat& x) {
                     for (auto& f : factors) {
                       std::int64_t val = f.value(x);
                       if (val < 2 || !is_prime(val)) return;
                     }
                     ++count;
                   },
                   budget);
  return count;
}

std::int64_t almost_prime_count(std::int64_t m, int n, const PolynomialOnV& f,
                                const NormSpec& norm, int r, const EnumBudget& budget) {
  if (f.n != n) throw ValidationError("factor dimension disagrees");
  if (r < 0) throw ValidationError("prime factor budget must be nonnegative");
  std::int64_t count = 0;
  enumerate_points(m, n, norm,
                   [&](const Mat& x) {
                     std::int64_t val = f.value(x);
                     if (val == 0) return;
                     if (omega_count(val) <= r) ++count;
                   },
                   budget);
  return count;
}

std::vector<ShapeRow> conjecture_shape(std::int64_t m, int n,
                                       const std::vector<PolynomialOnV>& factors,
                                       NormSpec::Kind kind, const std::vector<double>& grid,
                                       const EnumBudget& budget) {
  if (grid.size() < 3) throw ValidationError("shape table needs at least 3 thresholds");
  for (auto& f : factors) {
    if (f.degree() == 0) throw ValidationError("constant factors are not admissible");
  }
  std::vector<double> g = grid;
  std::sort(g.begin(), g.end());
  const auto t = static_cast<int>(factors.size());
  std::vector<ShapeRow> rows;
  for (double T : g) {
    NormSpec norm{kind, T};
    ShapeRow row;
    row.T = T;
    row.total_points = count_points(m, n, norm, budget);
    row.prime_points =
        factors.empty() ? row.total_points : pi_count(m, n, factors, norm, budget);
    if (row.total_points < 1) throw ValidationError("shape table: empty ball at T");
    row.ratio = static_cast<double>(row.prime_points) *
                std::pow(std::log(T), static_cast<double>(t)) /
                static_cast<double>(row.total_points);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detsieve
