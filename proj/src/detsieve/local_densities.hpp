#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "intmat.hpp"
#include "orbit_enum.hpp"
#include "rational.hpp"

namespace detsieve {

// integer polynomial g in the n^2 matrix entries, carried with its declared
// normalizer N (the tested function is g/N) and declared factor count t
struct PolyTerm {
  std::int64_t coef = 1;
  std::vector<int> exps;  // length n^2, row-major exponents
};

struct PolynomialOnV {
  int n = 2;
  std::vector<PolyTerm> terms;
  std::int64_t N = 1;
  int t = 1;

  static PolynomialOnV constant(int n, std::int64_t c);
  static PolynomialOnV entry(int n, int i, int j);  // 1-based indices

  PolynomialOnV operator+(const PolynomialOnV& o) const;
  PolynomialOnV operator*(const PolynomialOnV& o) const;

  int degree() const;
  i128 eval(const Mat& x) const;
  std::int64_t eval_mod(const Mat& x, std::int64_t d) const;
  // value of g/N at x; raises if N does not divide g(x) or the value overflows
  std::int64_t value(const Mat& x) const;
};

struct ResidueOrbit {
  std::int64_t d = 1;
  int n = 2;
  int bits = 1;
  std::uint64_t orbit_size = 0;
  bool retained = true;
  std::vector<std::uint64_t> keys;  // sorted packed elements when retained

  Mat element(std::size_t idx) const;
};

ResidueOrbit reduce_orbit_mod(const Mat& v, std::int64_t d, std::uint64_t cap = 8'000'000);

std::uint64_t vanishing_count(const ResidueOrbit& orbit, const PolynomialOnV& g);

// local density: d times the fraction of the orbit mod d*N where g vanishes
Rational rho_f(std::int64_t d, const Mat& v, const PolynomialOnV& f,
               std::uint64_t cap = 8'000'000);

bool check_multiplicativity(std::int64_t d1, std::int64_t d2, const Mat& v,
                            const PolynomialOnV& f);

struct PrimitivityReport {
  std::int64_t probed_gcd = 0;
  std::int64_t points_probed = 0;
  // for each prime: an orbit point where g/gcd is a unit mod p, if one was found
  std::vector<std::pair<std::int64_t, std::optional<Mat>>> witnesses;
};

PrimitivityReport weak_primitivity(const Mat& v, const PolynomialOnV& f, double probe_T,
                                   std::int64_t prime_bound);

// raises unless the declared normalizer equals the gcd of g over the probed orbit ball
void verify_normalizer(const Mat& v, const PolynomialOnV& f, double probe_T);

struct DimensionRow {
  std::int64_t p = 2;
  Rational rho;
  double scaled_dev = 0.0;  // |rho - t| * sqrt(p)
};

struct DimensionScan {
  bool degenerate = false;  // constant polynomial supplied
  std::vector<DimensionRow> rows;
};

DimensionScan sieve_dimension_scan(const Mat& v, const PolynomialOnV& f, std::int64_t P);

struct SingularSeries {
  Rational product{1};
  std::vector<std::pair<std::int64_t, Rational>> factors;
  std::vector<std::int64_t> skipped;  // primes dividing the normalizer
};

SingularSeries singular_series_partial(const Mat& v, const PolynomialOnV& f, int t,
                                       std::int64_t P);

// number of n x n matrices over F_p with determinant = m
std::uint64_t variety_count_mod_p(std::int64_t m, int n, std::int64_t p);

struct DensityTable {
  std::vector<std::pair<std::int64_t, Rational>> rows;
  const Rational* find(std::int64_t d) const;
};

DensityTable build_density_table(const Mat& v, const PolynomialOnV& f,
                                 const std::vector<std::int64_t>& moduli);

}  // namespace detsieve
