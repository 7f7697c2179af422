#include "local_densities.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_set>

#include "arithmetic.hpp"
#include "errors.hpp"

namespace detsieve {

namespace {

void check_same_shape(const PolynomialOnV& f, const Mat& x) {
  if (x.rows() != f.n || x.cols() != f.n) {
    throw ValidationError("polynomial and matrix dimensions disagree");
  }
}

void merge_terms(PolynomialOnV& p) {
  std::map<std::vector<int>, std::int64_t> acc;
  for (auto& t : p.terms) acc[t.exps] += t.coef;
  p.terms.clear();
  for (auto& [e, c] : acc) {
    if (c != 0) p.terms.push_back({c, e});
  }
}

}  // namespace

PolynomialOnV PolynomialOnV::constant(int n, std::int64_t c) {
  validate_dimension(n);
  PolynomialOnV p;
  p.n = n;
  if (c != 0) p.terms.push_back({c, std::vector<int>(static_cast<std::size_t>(n * n), 0)});
  return p;
}

PolynomialOnV PolynomialOnV::entry(int n, int i, int j) {
  validate_dimension(n);
  if (i < 1 || i > n || j < 1 || j > n) throw ValidationError("entry index out of range");
  PolynomialOnV p;
  p.n = n;
  PolyTerm t;
  t.coef = 1;
  t.exps.assign(static_cast<std::size_t>(n * n), 0);
  t.exps[static_cast<std::size_t>((i - 1) * n + (j - 1))] = 1;
  p.terms.push_back(std::move(t));
  return p;
}

PolynomialOnV PolynomialOnV::operator+(const PolynomialOnV& o) const {
  if (n != o.n) throw ValidationError("polynomial dimensions disagree");
  PolynomialOnV p = *this;
  p.terms.insert(p.terms.end(), o.terms.begin(), o.terms.end());
  merge_terms(p);
  return p;
}

PolynomialOnV PolynomialOnV::operator*(const PolynomialOnV& o) const {
  if (n != o.n) throw ValidationError("polynomial dimensions disagree");
  PolynomialOnV p;
  p.n = n;
  for (auto& a : terms) {
    for (auto& b : o.terms) {
      PolyTerm t;
      i128 c = Rational::checked_mul(a.coef, b.coef);
      if (c > INT64_MAX || c < INT64_MIN) throw BudgetError("polynomial coefficient overflow");
      t.coef = static_cast<std::int64_t>(c);
      t.exps.resize(a.exps.size());
      for (std::size_t k = 0; k < a.exps.size(); ++k) t.exps[k] = a.exps[k] + b.exps[k];
      p.terms.push_back(std::move(t));
    }
  }
  merge_terms(p);
  return p;
}

int PolynomialOnV::degree() const {
  int d = 0;
  for (auto& t : terms) {
    int s = std::accumulate(t.exps.begin(), t.exps.end(), 0);
    d = std::max(d, s);
  }
  return d;
}

i128 PolynomialOnV::eval(const Mat& x) const {
  check_same_shape(*this, x);
  i128 acc = 0;
  for (auto& t : terms) {
    i128 v = t.coef;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        int e = t.exps[static_cast<std::size_t>(i * n + j)];
        for (int k = 0; k < e; ++k) v = Rational::checked_mul(v, x(i, j));
      }
    }
    acc = Rational::checked_add(acc, v);
  }
  return acc;
}

std::int64_t PolynomialOnV::eval_mod(const Mat& x, std::int64_t d) const {
  check_same_shape(*this, x);
  if (d < 1) throw ValidationError("eval_mod: modulus must be positive");
  std::int64_t acc = 0;
  for (auto& t : terms) {
    std::int64_t v = ((t.coef % d) + d) % d;
    for (int i = 0; i < n && v != 0; ++i) {
      for (int j = 0; j < n; ++j) {
        int e = t.exps[static_cast<std::size_t>(i * n + j)];
        if (e == 0) continue;
        std::int64_t b = ((x(i, j) % d) + d) % d;
        for (int k = 0; k < e; ++k) v = (v * b) % d;
      }
    }
    acc = (acc + v) % d;
  }
  return acc;
}

std::int64_t PolynomialOnV::value(const Mat& x) const {
  i128 g = eval(x);
  if (N < 1) throw ValidationError("normalizer must be positive");
  if (g % N != 0) {
    throw ValidationError("declared normalizer does not divide the polynomial value");
  }
  i128 v = g / N;
  if (v > INT64_MAX || v < INT64_MIN) throw BudgetError("polynomial value overflows 64 bits");
  return static_cast<std::int64_t>(v);
}

Mat ResidueOrbit::element(std::size_t idx) const {
  if (!retained || idx >= keys.size()) throw ValidationError("orbit elements not retained");
  return internal::unpack_residue(keys[idx], n, bits);
}

ResidueOrbit reduce_orbit_mod(const Mat& v, std::int64_t d, std::uint64_t cap) {
  if (v.rows() != v.cols()) throw ValidationError("orbit base point must be square");
  const int n = static_cast<int>(v.rows());
  validate_dimension(n);
  if (d < 1) throw ValidationError("modulus must be positive");
  ResidueOrbit orbit;
  orbit.d = d;
  orbit.n = n;
  orbit.bits = internal::pack_bits_for(d, n);
  if (d == 1) {
    orbit.orbit_size = 1;
    orbit.keys = {internal::pack_residue(mat_mod(v, 1), orbit.bits)};
    return orbit;
  }
  std::unordered_set<std::uint64_t> seen;
  std::deque<std::uint64_t> queue;
  std::uint64_t start = internal::pack_residue(mat_mod(v, d), orbit.bits);
  seen.insert(start);
  queue.push_back(start);
  while (!queue.empty()) {
    std::uint64_t key = queue.front();
    queue.pop_front();
    Mat cur = internal::unpack_residue(key, n, orbit.bits);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (std::int64_t s : {std::int64_t{1}, d - 1}) {
          Mat nxt = cur;
          for (int c = 0; c < n; ++c) nxt(i, c) = (nxt(i, c) + s * cur(j, c)) % d;
          std::uint64_t nk = internal::pack_residue(nxt, orbit.bits);
          if (seen.insert(nk).second) {
            if (seen.size() > cap) throw BudgetError("residue orbit exceeds element budget");
            queue.push_back(nk);
          }
        }
      }
    }
  }
  orbit.orbit_size = seen.size();
  orbit.keys.assign(seen.begin(), seen.end());
  std::sort(orbit.keys.begin(), orbit.keys.end());
  return orbit;
}

std::uint64_t vanishing_count(const ResidueOrbit& orbit, const PolynomialOnV& g) {
  if (g.n != orbit.n) throw ValidationError("polynomial and orbit dimensions disagree");
  if (!orbit.retained) throw ValidationError("orbit elements not retained");
  std::uint64_t count = 0;
  for (std::uint64_t key : orbit.keys) {
    Mat x = internal::unpack_residue(key, orbit.n, orbit.bits);
    if (g.eval_mod(x, orbit.d) == 0) ++count;
  }
  return count;
}

Rational rho_f(std::int64_t d, const Mat& v, const PolynomialOnV& f, std::uint64_t cap) {
  if (d < 1) throw ValidationError("rho_f: modulus must be positive");
  if (d > 1 && moebius(d) == 0) throw ValidationError("rho_f: modulus must be squarefree");
  if (f.N < 1) throw ValidationError("rho_f: normalizer must be positive");
  std::int64_t dN = d * f.N;
  ResidueOrbit orbit = reduce_orbit_mod(v, dN, cap);
  std::uint64_t vanish = vanishing_count(orbit, f);
  return Rational(Rational::checked_mul(d, static_cast<i128>(vanish)),
                  static_cast<i128>(orbit.orbit_size));
}

bool check_multiplicativity(std::int64_t d1, std::int64_t d2, const Mat& v,
                            const PolynomialOnV& f) {
  if (std::gcd(d1, d2) != 1) throw ValidationError("moduli must be coprime");
  return rho_f(d1 * d2, v, f) == rho_f(d1, v, f) * rho_f(d2, v, f);
}

namespace {

// orbit points of v inside the ball, visited in enumeration order
void for_orbit_points(const Mat& v, double probe_T,
                      const std::function<void(const Mat&)>& sink) {
  const int n = static_cast<int>(v.rows());
  i128 det = det_exact(v);
  if (det == 0) throw ValidationError("orbit base point must be nonsingular");
  if (det < INT64_MIN || det > INT64_MAX) throw BudgetError("determinant overflows 64 bits");
  auto m = static_cast<std::int64_t>(det);
  NormSpec norm{NormSpec::Kind::MaxEntry, probe_T};
  if (m > 0) {
    OrbitDecomposition dec = hnf_orbit_reps(m, n);
    if (dec.reps.size() == 1) {
      enumerate_points(m, n, norm, sink);
      return;
    }
    int home = orbit_of(v, dec);
    enumerate_points(m, n, norm, [&](const Mat& x) {
      if (orbit_of(x, dec) == home) sink(x);
    });
    return;
  }
  // negative determinant: compare canonical forms after a fixed row negation
  Mat flip = v;
  for (int c = 0; c < n; ++c) flip(0, c) = -flip(0, c);
  OrbitDecomposition dec = hnf_orbit_reps(-m, n);
  int home = orbit_of(flip, dec);
  enumerate_points(m, n, norm, [&](const Mat& x) {
    Mat fx = x;
    for (int c = 0; c < n; ++c) fx(0, c) = -fx(0, c);
    if (orbit_of(fx, dec) == home) sink(x);
  });
}

}  // namespace

PrimitivityReport weak_primitivity(const Mat& v, const PolynomialOnV& f, double probe_T,
                                   std::int64_t prime_bound) {
  check_same_shape(f, v);
  PrimitivityReport rep;
  i128 g = 0;
  std::vector<Mat> points;
  for_orbit_points(v, probe_T, [&](const Mat& x) {
    points.push_back(x);
    g = gcd128(g, f.eval(x));
  });
  rep.points_probed = static_cast<std::int64_t>(points.size());
  if (points.empty()) throw ValidationError("probe ball contains no orbit points");
  if (g == 0) {
    // polynomial vanishes on every probed point
    rep.probed_gcd = 0;
    for (std::int64_t p : primes_up_to(prime_bound)) rep.witnesses.push_back({p, std::nullopt});
    return rep;
  }
  if (g > INT64_MAX) throw BudgetError("probed gcd overflows 64 bits");
  rep.probed_gcd = static_cast<std::int64_t>(g);
  for (std::int64_t p : primes_up_to(prime_bound)) {
    std::optional<Mat> witness;
    for (const Mat& x : points) {
      i128 val = f.eval(x) / g;
      i128 r = val % p;
      if (r != 0) {
        witness = x;
        break;
      }
    }
    rep.witnesses.push_back({p, witness});
  }
  return rep;
}

void verify_normalizer(const Mat& v, const PolynomialOnV& f, double probe_T) {
  PrimitivityReport rep = weak_primitivity(v, f, probe_T, 2);
  if (rep.probed_gcd != f.N) {
    throw ValidationError("declared normalizer " + std::to_string(f.N) +
                          " does not match the probed gcd " + std::to_string(rep.probed_gcd));
  }
}

DimensionScan sieve_dimension_scan(const Mat& v, const PolynomialOnV& f, std::int64_t P) {
  DimensionScan scan;
  if (f.degree() == 0) {
    scan.degenerate = true;
    return scan;
  }
  for (std::int64_t p : primes_up_to(P)) {
    DimensionRow row;
    row.p = p;
    row.rho = rho_f(p, v, f);
    row.scaled_dev = std::abs(row.rho.to_double() - static_cast<double>(f.t)) *
                     std::sqrt(static_cast<double>(p));
    scan.rows.push_back(row);
  }
  return scan;
}

SingularSeries singular_series_partial(const Mat& v, const PolynomialOnV& f, int t,
                                       std::int64_t P) {
  SingularSeries series;
  for (std::int64_t p : primes_up_to(P)) {
    if (f.N % p == 0) {
      series.skipped.push_back(p);
      continue;
    }
    ResidueOrbit orbit = reduce_orbit_mod(v, p);
    std::uint64_t vanish = vanishing_count(orbit, f);
    Rational factor =
        (Rational(1) - Rational(static_cast<i128>(vanish), static_cast<i128>(orbit.orbit_size))) *
        (Rational(1) + Rational(t, p));
    series.factors.push_back({p, factor});
    series.product = series.product * factor;
  }
  return series;
}

namespace {

std::uint64_t variety_count_scan(std::int64_t mr, int n, std::int64_t p) {
  Mat x = Mat::Zero(n, n);
  const auto cells = static_cast<std::size_t>(n * n);
  std::vector<std::int64_t> digits(cells, 0);
  std::uint64_t count = 0;
  while (true) {
    for (std::size_t c = 0; c < cells; ++c) x(static_cast<int>(c) / n, static_cast<int>(c) % n) = digits[c];
    i128 det = det_exact(x) % p;
    if (det < 0) det += p;
    if (det == mr) ++count;
    std::size_t idx = 0;
    while (idx < cells) {
      if (++digits[idx] < p) break;
      digits[idx] = 0;
      ++idx;
    }
    if (idx == cells) break;
  }
  return count;
}

// order of GL_n(F_p) divided by (p - 1), i.e. matrices of any fixed nonzero determinant,
// assembled row by row: the k-th row avoids the span of the previous ones
std::uint64_t nonzero_det_class_count(int n, std::int64_t p) {
  i128 total = 1;
  i128 pn = 1;
  for (int i = 0; i < n; ++i) pn = Rational::checked_mul(pn, p);
  i128 pk = 1;
  for (int k = 0; k < n; ++k) {
    total = Rational::checked_mul(total, pn - pk);
    pk = Rational::checked_mul(pk, p);
  }
  total = total / (p - 1);
  if (total > static_cast<i128>(UINT64_MAX)) throw BudgetError("variety count overflows 64 bits");
  return static_cast<std::uint64_t>(total);
}

}  // namespace

std::uint64_t variety_count_mod_p(std::int64_t m, int n, std::int64_t p) {
  validate_dimension(n);
  if (p < 2 || !is_prime(p)) throw ValidationError("variety count needs a prime modulus");
  std::int64_t mr = ((m % p) + p) % p;
  if (n == 2 && p <= 41) return variety_count_scan(mr, n, p);
  if (n == 3 && p <= 3) return variety_count_scan(mr, n, p);
  if (mr != 0) return nonzero_det_class_count(n, p);
  i128 pnn = 1;
  for (int i = 0; i < n * n; ++i) pnn = Rational::checked_mul(pnn, p);
  i128 invertible = static_cast<i128>(nonzero_det_class_count(n, p)) * (p - 1);
  i128 total = pnn - invertible;
  if (total > static_cast<i128>(UINT64_MAX)) throw BudgetError("variety count overflows 64 bits");
  return static_cast<std::uint64_t>(total);
}

const Rational* DensityTable::find(std::int64_t d) const {
  for (auto& [mod, rho] : rows) {
    if (mod == d) return &rho;
  }
  return nullptr;
}

DensityTable build_density_table(const Mat& v, const PolynomialOnV& f,
                                 const std::vector<std::int64_t>& moduli) {
  DensityTable table;
  for (std::int64_t d : moduli) table.rows.push_back({d, rho_f(d, v, f)});
  return table;
}

}  // namespace detsieve
