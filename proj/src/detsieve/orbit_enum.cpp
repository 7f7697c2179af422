#include "orbit_enum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "arithmetic.hpp"
#include "errors.hpp"

namespace detsieve {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

std::int64_t isqrt64(std::int64_t v) {
  if (v < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

struct KRange {
  std::int64_t lo = 0;
  std::int64_t hi = -1;
  bool whole = false;  // unconstrained direction (step 0 with offset already in range)
  bool empty() const { return !whole && lo > hi; }
};

// integer k with |c0 + s*k| <= B
KRange range_for(std::int64_t c0, std::int64_t s, std::int64_t B) {
  KRange r;
  if (s == 0) {
    if (c0 >= -B && c0 <= B) {
      r.whole = true;
    } else {
      r.lo = 0;
      r.hi = -1;
    }
    return r;
  }
  std::int64_t lo1, hi1;
  if (s > 0) {
    lo1 = ceil_div(-B - c0, s);
    hi1 = floor_div(B - c0, s);
  } else {
    lo1 = ceil_div(B - c0, s);
    hi1 = floor_div(-B - c0, s);
  }
  r.lo = lo1;
  r.hi = hi1;
  return r;
}

KRange intersect(const KRange& a, const KRange& b) {
  if (a.whole) return b;
  if (b.whole) return a;
  KRange r;
  r.lo = std::max(a.lo, b.lo);
  r.hi = std::min(a.hi, b.hi);
  return r;
}

struct VisitCounter {
  std::int64_t used = 0;
  std::int64_t cap = 0;
  void charge(std::int64_t amount = 1) {
    used += amount;
    if (used > cap) throw BudgetError("enumeration budget exhausted");
  }
};

// second-row solutions of a*d - b*c = m form the line (c0 + (a/g)k, d0 + (b/g)k)
struct RowFamily {
  bool solvable = false;
  std::int64_t c0 = 0, d0 = 0, sc = 0, sd = 0;
};

RowFamily second_row_family(std::int64_t a, std::int64_t b, std::int64_t m) {
  RowFamily f;
  if (a == 0 && b == 0) return f;
  std::int64_t g = 0;
  auto [u, v] = internal::ext_gcd(a, b, g);
  if (m % g != 0) return f;
  std::int64_t scale = m / g;
  f.solvable = true;
  f.d0 = u * scale;
  f.c0 = -v * scale;
  f.sc = a / g;
  f.sd = b / g;
  return f;
}

void enumerate_n2(std::int64_t m, const NormSpec& norm,
                  const std::function<void(const Mat&)>& sink, VisitCounter& visits) {
  const std::int64_t B = norm_box_bound(norm);
  const bool frob = norm.kind == NormSpec::Kind::Frobenius;
  const std::int64_t cap =
      frob ? static_cast<std::int64_t>(
                 std::floor(static_cast<long double>(norm.T) * norm.T + 1e-6L))
           : 0;
  Mat w(2, 2);
  for (std::int64_t a = -B; a <= B; ++a) {
    for (std::int64_t b = -B; b <= B; ++b) {
      visits.charge();
      if (frob && a * a + b * b > cap) continue;
      RowFamily f = second_row_family(a, b, m);
      if (!f.solvable) continue;
      std::int64_t rem = frob ? cap - a * a - b * b : 0;
      std::int64_t Bi = frob ? isqrt64(rem) : B;
      KRange kr = intersect(range_for(f.c0, f.sc, Bi), range_for(f.d0, f.sd, Bi));
      if (kr.whole) {
        // both steps zero cannot happen (a, b not both zero)
        throw std::logic_error("unbounded solution family");
      }
      if (kr.empty()) continue;
      for (std::int64_t k = kr.lo; k <= kr.hi; ++k) {
        std::int64_t c = f.c0 + f.sc * k;
        std::int64_t d = f.d0 + f.sd * k;
        if (frob && c * c + d * d > rem) continue;
        visits.charge();
        w << a, b, c, d;
        sink(w);
      }
    }
  }
}

std::int64_t count_n2_max(std::int64_t m, const NormSpec& norm, VisitCounter& visits) {
  const std::int64_t B = norm_box_bound(norm);
  std::int64_t total = 0;
  for (std::int64_t a = -B; a <= B; ++a) {
    for (std::int64_t b = -B; b <= B; ++b) {
      visits.charge();
      RowFamily f = second_row_family(a, b, m);
      if (!f.solvable) continue;
      KRange kr = intersect(range_for(f.c0, f.sc, B), range_for(f.d0, f.sd, B));
      if (kr.whole) throw std::logic_error("unbounded solution family");
      if (!kr.empty()) total += kr.hi - kr.lo + 1;
    }
  }
  return total;
}

void enumerate_n3(std::int64_t m, const NormSpec& norm,
                  const std::function<void(const Mat&)>& sink, VisitCounter& visits) {
  const std::int64_t B = norm_box_bound(norm);
  const bool frob = norm.kind == NormSpec::Kind::Frobenius;
  const std::int64_t cap =
      frob ? static_cast<std::int64_t>(
                 std::floor(static_cast<long double>(norm.T) * norm.T + 1e-6L))
           : 0;
  Mat w(3, 3);
  for (std::int64_t p = -B; p <= B; ++p)
    for (std::int64_t q = -B; q <= B; ++q)
      for (std::int64_t r = -B; r <= B; ++r)
        for (std::int64_t s = -B; s <= B; ++s)
          for (std::int64_t t = -B; t <= B; ++t)
            for (std::int64_t u = -B; u <= B; ++u) {
              visits.charge();
              std::int64_t sq2 = 0;
              if (frob) {
                sq2 = p * p + q * q + r * r + s * s + t * t + u * u;
                if (sq2 > cap) continue;
              }
              // determinant expanded along the third row
              std::int64_t A0 = q * u - r * t;
              std::int64_t A1 = -(p * u - r * s);
              std::int64_t A2 = p * t - q * s;
              if (A0 == 0 && A1 == 0 && A2 == 0) continue;
              // pivot on the largest coefficient, earliest index on ties
              int piv = 0;
              std::int64_t best = std::abs(A0);
              if (std::abs(A1) > best) piv = 1, best = std::abs(A1);
              if (std::abs(A2) > best) piv = 2, best = std::abs(A2);
              const std::int64_t A[3] = {A0, A1, A2};
              const int o1 = piv == 0 ? 1 : 0;
              const int o2 = piv == 2 ? 1 : 2;
              std::int64_t row3[3];
              for (std::int64_t x1 = -B; x1 <= B; ++x1) {
                for (std::int64_t x2 = -B; x2 <= B; ++x2) {
                  std::int64_t num = m - A[o1] * x1 - A[o2] * x2;
                  if (num % A[piv] != 0) continue;
                  std::int64_t xp = num / A[piv];
                  if (xp < -B || xp > B) continue;
                  row3[o1] = x1;
                  row3[o2] = x2;
                  row3[piv] = xp;
                  if (frob &&
                      sq2 + row3[0] * row3[0] + row3[1] * row3[1] + row3[2] * row3[2] > cap)
                    continue;
                  visits.charge();
                  w << p, q, r, s, t, u, row3[0], row3[1], row3[2];
                  sink(w);
                }
              }
            }
}

void validate_enum_args(std::int64_t m, int n, const NormSpec& norm) {
  if (m == 0) throw ValidationError("determinant must be nonzero");
  if (n != 2 && n != 3) throw ValidationError("enumeration supports n in {2, 3}");
  if (!(norm.T >= 1.0)) throw ValidationError("norm threshold must be >= 1");
}

}  // namespace

void enumerate_points(std::int64_t m, int n, const NormSpec& norm,
                      const std::function<void(const Mat&)>& sink, const EnumBudget& budget) {
  validate_enum_args(m, n, norm);
  VisitCounter visits{0, budget.max_visits};
  if (n == 2) {
    enumerate_n2(m, norm, sink, visits);
  } else {
    enumerate_n3(m, norm, sink, visits);
  }
}

std::vector<Mat> collect_points(std::int64_t m, int n, const NormSpec& norm,
                                const EnumBudget& budget) {
  std::vector<Mat> out;
  enumerate_points(m, n, norm, [&](const Mat& x) { out.push_back(x); }, budget);
  return out;
}

std::int64_t count_points(std::int64_t m, int n, const NormSpec& norm,
                          const EnumBudget& budget) {
  validate_enum_args(m, n, norm);
  VisitCounter visits{0, budget.max_visits};
  if (n == 2 && norm.kind == NormSpec::Kind::MaxEntry) {
    return count_n2_max(m, norm, visits);
  }
  std::int64_t total = 0;
  if (n == 2) {
    enumerate_n2(m, norm, [&](const Mat&) { ++total; }, visits);
  } else {
    enumerate_n3(m, norm, [&](const Mat&) { ++total; }, visits);
  }
  return total;
}

GrowthFit fit_growth_exponent(const CountSeries& series) {
  const auto& g = series.grid;
  if (g.size() < 4) throw ValidationError("growth fit needs at least 4 grid points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(g.size());
  for (auto& [T, c] : g) {
    if (!(T >= 1.0)) throw ValidationError("growth fit: thresholds must be >= 1");
    if (c < 1) throw ValidationError("growth fit: counts must be positive");
    double x = std::log(T);
    double y = std::log(static_cast<double>(c));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12) throw ValidationError("growth fit: degenerate threshold grid");
  GrowthFit fit;
  fit.exponent = (n * sxy - sx * sy) / denom;
  double intercept = (sy - fit.exponent * sx) / n;
  fit.leading = std::exp(intercept);
  double ss = 0;
  for (auto& [T, c] : g) {
    double e = std::log(static_cast<double>(c)) - (intercept + fit.exponent * std::log(T));
    ss += e * e;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

namespace {

void gen_hnf(std::int64_t m, int n, int row, Mat& work, std::vector<Mat>& out) {
  if (row == n) {
    // the diagonal must absorb all of m, otherwise the determinant is a proper divisor
    if (m == 1) out.push_back(work);
    return;
  }
  for (std::int64_t d = 1; d <= m; ++d) {
    if (m % d != 0) continue;
    work(row, row) = d;
    // odometer over the entries above this diagonal, each in [0, d)
    std::vector<std::int64_t> off(static_cast<std::size_t>(row), 0);
    while (true) {
      for (int i = 0; i < row; ++i) work(i, row) = off[static_cast<std::size_t>(i)];
      gen_hnf(m / d, n, row + 1, work, out);
      int idx = row - 1;
      while (idx >= 0) {
        if (++off[static_cast<std::size_t>(idx)] < d) break;
        off[static_cast<std::size_t>(idx)] = 0;
        --idx;
      }
      if (idx < 0) break;
    }
  }
}

}  // namespace

OrbitDecomposition hnf_orbit_reps(std::int64_t m, int n) {
  if (m < 1) throw ValidationError("orbit decomposition requires positive determinant");
  validate_dimension(n);
  if (n > 3 && m > 64) throw BudgetError("orbit decomposition too large");
  OrbitDecomposition dec;
  dec.m = m;
  dec.n = n;
  Mat work = Mat::Zero(n, n);
  gen_hnf(m, n, 0, work, dec.reps);
  return dec;
}

Mat hnf_of(const Mat& x) {
  if (x.rows() != x.cols()) throw ValidationError("hnf_of: matrix not square");
  const int n = static_cast<int>(x.rows());
  validate_dimension(n);
  if (det_exact(x) <= 0) throw ValidationError("hnf_of: determinant must be positive");
  Mat h = x;
  for (int j = 0; j < n; ++j) {
    for (int i = j + 1; i < n; ++i) {
      if (h(i, j) == 0) continue;
      std::int64_t g = 0;
      auto [u, v] = internal::ext_gcd(h(j, j), h(i, j), g);
      std::int64_t sa = h(j, j) / g;
      std::int64_t sb = h(i, j) / g;
      for (int c = 0; c < n; ++c) {
        std::int64_t rj = h(j, c), ri = h(i, c);
        h(j, c) = u * rj + v * ri;
        h(i, c) = -sb * rj + sa * ri;
      }
    }
  }
  // determinant positive, so negative diagonal entries come in pairs
  for (int i = 0; i < n; ++i) {
    if (h(i, i) < 0) {
      for (int c = 0; c < n; ++c) h(i, c) = -h(i, c);
    }
  }
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < j; ++i) {
      std::int64_t qd = floor_div(h(i, j), h(j, j));
      if (qd == 0) continue;
      for (int c = 0; c < n; ++c) h(i, c) -= qd * h(j, c);
    }
  }
  return h;
}

int orbit_of(const Mat& x, const OrbitDecomposition& decomposition) {
  if (det_exact(x) != static_cast<i128>(decomposition.m)) {
    throw ValidationError("orbit_of: determinant does not match the decomposition");
  }
  Mat h = hnf_of(x);
  for (std::size_t i = 0; i < decomposition.reps.size(); ++i) {
    if (mats_equal(h, decomposition.reps[i])) return static_cast<int>(i);
  }
  throw ValidationError("orbit_of: canonical form missing from the decomposition");
}

namespace internal {

int pack_bits_for(std::int64_t q, int n) {
  if (q < 1) throw ValidationError("modulus must be positive");
  int bits = 1;
  while ((std::int64_t{1} << bits) < q) ++bits;
  if (n * n * bits > 64) throw BudgetError("residue matrices do not fit a 64-bit key");
  return bits;
}

std::uint64_t pack_residue(const Mat& x, int bits) {
  std::uint64_t key = 0;
  int shift = 0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      key |= static_cast<std::uint64_t>(x(i, j)) << shift;
      shift += bits;
    }
  }
  return key;
}

Mat unpack_residue(std::uint64_t key, int n, int bits) {
  Mat x(n, n);
  const std::uint64_t mask = (bits == 64) ? ~0ull : ((1ull << bits) - 1);
  int shift = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      x(i, j) = static_cast<std::int64_t>((key >> shift) & mask);
      shift += bits;
    }
  }
  return x;
}

}  // namespace internal

std::int64_t congruence_index(int n, std::int64_t q, std::int64_t state_cap) {
  validate_dimension(n);
  if (q < 1) throw ValidationError("congruence_index: modulus must be positive");
  if (q == 1) return 1;
  const int bits = internal::pack_bits_for(q, n);
  std::unordered_set<std::uint64_t> seen;
  std::deque<std::uint64_t> queue;
  Mat id = Mat::Identity(n, n);
  std::uint64_t start = internal::pack_residue(mat_mod(id, q), bits);
  seen.insert(start);
  queue.push_back(start);
  while (!queue.empty()) {
    std::uint64_t key = queue.front();
    queue.pop_front();
    Mat cur = internal::unpack_residue(key, n, bits);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (std::int64_t s : {std::int64_t{1}, q - 1}) {
          Mat nxt = cur;
          for (int c = 0; c < n; ++c) nxt(i, c) = (nxt(i, c) + s * cur(j, c)) % q;
          std::uint64_t nk = internal::pack_residue(nxt, bits);
          if (seen.insert(nk).second) {
            if (static_cast<std::int64_t>(seen.size()) > state_cap) {
              throw BudgetError("congruence_index: state budget exhausted");
            }
            queue.push_back(nk);
          }
        }
      }
    }
  }
  return static_cast<std::int64_t>(seen.size());
}

std::int64_t congruence_coset_count(std::int64_t q, const Mat& y, const NormSpec& norm,
                                    const EnumBudget& budget) {
  if (q < 1) throw ValidationError("congruence_coset_count: modulus must be positive");
  if (y.rows() != 2 || y.cols() != 2) {
    throw ValidationError("congruence_coset_count: base point must be 2x2");
  }
  if (det_exact(y) != 1) {
    throw ValidationError("congruence_coset_count: base point must be unimodular");
  }
  Mat target = mat_mod(y, q);
  std::int64_t count = 0;
  enumerate_points(1, 2, norm,
                   [&](const Mat& w) {
                     if (mats_equal(mat_mod(w, q), target)) ++count;
                   },
                   budget);
  return count;
}

UniformityReport uniformity_report(std::int64_t q, const std::vector<double>& T_grid,
                                   NormSpec::Kind kind, const EnumBudget& budget) {
  if (q < 1) throw ValidationError("uniformity_report: modulus must be positive");
  if (T_grid.empty()) throw ValidationError("uniformity_report: empty threshold grid");
  UniformityReport rep;
  rep.q = q;
  rep.index = congruence_index(2, q);

  const int bits = internal::pack_bits_for(q, 2);
  // full residue group, sorted keys, via the same closure used for the index
  std::vector<std::uint64_t> group_keys;
  {
    std::unordered_set<std::uint64_t> seen;
    std::deque<std::uint64_t> queue;
    std::uint64_t start = internal::pack_residue(mat_mod(Mat::Identity(2, 2), q), bits);
    seen.insert(start);
    queue.push_back(start);
    while (!queue.empty()) {
      std::uint64_t key = queue.front();
      queue.pop_front();
      Mat cur = internal::unpack_residue(key, 2, bits);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          if (i == j) continue;
          for (std::int64_t s : {std::int64_t{1}, q - 1}) {
            Mat nxt = cur;
            for (int c = 0; c < 2; ++c) nxt(i, c) = (nxt(i, c) + s * cur(j, c)) % q;
            std::uint64_t nk = internal::pack_residue(nxt, bits);
            if (seen.insert(nk).second) queue.push_back(nk);
          }
        }
      }
    }
    group_keys.assign(seen.begin(), seen.end());
    std::sort(group_keys.begin(), group_keys.end());
  }
  for (std::uint64_t key : group_keys) {
    rep.coset_reps.push_back(internal::unpack_residue(key, 2, bits));
  }

  std::vector<double> grid = T_grid;
  std::sort(grid.begin(), grid.end());
  for (double T : grid) {
    std::unordered_map<std::uint64_t, std::int64_t> bucket;
    NormSpec norm{kind, T};
    enumerate_points(1, 2, norm,
                     [&](const Mat& w) {
                       ++bucket[internal::pack_residue(mat_mod(w, q), bits)];
                     },
                     budget);
    UniformityRow row;
    row.T = T;
    for (std::uint64_t key : group_keys) {
      auto it = bucket.find(key);
      row.coset_counts.push_back(it == bucket.end() ? 0 : it->second);
      row.total += row.coset_counts.back();
    }
    if (row.total > 0) {
      for (std::int64_t c : row.coset_counts) {
        double dev = std::abs(static_cast<double>(rep.index) * static_cast<double>(c) /
                                  static_cast<double>(row.total) -
                              1.0);
        row.max_deviation = std::max(row.max_deviation, dev);
      }
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace detsieve
