#include "detsieve/local_densities.hpp"

#include <random>

#include "detsieve/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace detsieve;

namespace {

PolynomialOnV entry_poly(int n, int i, int j) { return PolynomialOnV::entry(n, i, j); }

Mat identity2() { return Mat::Identity(2, 2); }

}  // namespace

TEST_CASE("polynomials evaluate, add, and multiply consistently") {
  PolynomialOnV f = entry_poly(2, 1, 1) * entry_poly(2, 2, 2) + PolynomialOnV::constant(2, -1);
  CHECK(f.degree() == 2);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    Mat x(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) x(i, j) = static_cast<std::int64_t>(rng() % 41) - 20;
    CHECK(f.eval(x) == static_cast<i128>(x(0, 0)) * x(1, 1) - 1);
    CHECK(f.eval_mod(x, 7) == static_cast<std::int64_t>((((f.eval(x)) % 7) + 7) % 7));
  }
  CHECK_THROWS_AS(entry_poly(2, 3, 1), ValidationError);
  CHECK_THROWS_AS(entry_poly(2, 0, 1), ValidationError);
}

TEST_CASE("declared normalizer divides or the evaluation refuses") {
  PolynomialOnV f = entry_poly(2, 1, 1);
  f.N = 2;
  Mat x = identity2();
  CHECK_THROWS_AS(f.value(x), ValidationError);
  Mat y(2, 2);
  y << 6, 1, 5, 1;
  CHECK(f.value(y) == 3);
}

TEST_CASE("orbit reduction mod d has the residue group size on the identity") {
  ResidueOrbit orbit = reduce_orbit_mod(identity2(), 5);
  CHECK(orbit.orbit_size == 120);
  CHECK(orbit.retained);
  CHECK(orbit.keys.size() == 120);
  // a determinant-2 point lands in the determinant-2 slice, same size for prime d
  Mat v(2, 2);
  v << 1, 0, 0, 2;
  CHECK(reduce_orbit_mod(v, 5).orbit_size == 120);
  CHECK_THROWS_AS(reduce_orbit_mod(identity2(), 7, 100), BudgetError);
}

TEST_CASE("local density of the first entry is p over p plus one") {
  for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
    CHECK(rho_f(p, identity2(), entry_poly(2, 1, 1)) == Rational(p, p + 1));
  }
}

TEST_CASE("local density of the diagonal product is 2p-1 over p+1") {
  PolynomialOnV f = entry_poly(2, 1, 1) * entry_poly(2, 2, 2);
  f.t = 2;
  for (std::int64_t p : {2, 3, 5, 7, 11}) {
    CHECK(rho_f(p, identity2(), f) == Rational(2 * p - 1, p + 1));
  }
}

TEST_CASE("local density validates its modulus") {
  CHECK(rho_f(1, identity2(), entry_poly(2, 1, 1)) == Rational(1));
  CHECK_THROWS_AS(rho_f(4, identity2(), entry_poly(2, 1, 1)), ValidationError);
  CHECK_THROWS_AS(rho_f(0, identity2(), entry_poly(2, 1, 1)), ValidationError);
}

TEST_CASE("densities are multiplicative across coprime squarefree moduli") {
  OrbitDecomposition dec = hnf_orbit_reps(2, 2);
  PolynomialOnV sum = entry_poly(2, 1, 1) + entry_poly(2, 2, 2);
  PolynomialOnV prod = entry_poly(2, 1, 1) * entry_poly(2, 2, 2);
  prod.t = 2;
  for (const Mat& v : {dec.reps[0], dec.reps[1]}) {
    for (auto [d1, d2] : std::vector<std::pair<std::int64_t, std::int64_t>>{
             {2, 3}, {3, 5}, {2, 7}}) {
      CHECK(check_multiplicativity(d1, d2, v, entry_poly(2, 1, 1)));
      CHECK(check_multiplicativity(d1, d2, v, sum));
      CHECK(check_multiplicativity(d1, d2, v, prod));
    }
  }
}

TEST_CASE("weak primitivity probe finds unit witnesses for the first entry") {
  PrimitivityReport rep = weak_primitivity(identity2(), entry_poly(2, 1, 1), 4.0, 13);
  CHECK(rep.probed_gcd == 1);
  CHECK(rep.points_probed > 0);
  for (const auto& [p, witness] : rep.witnesses) {
    CHECK(witness.has_value());
  }
  CHECK_NOTHROW(verify_normalizer(identity2(), entry_poly(2, 1, 1), 4.0));
}

TEST_CASE("a doubled entry polynomial fails normalizer verification until declared") {
  PolynomialOnV doubled = PolynomialOnV::constant(2, 2) * entry_poly(2, 1, 1);
  CHECK_THROWS_AS(verify_normalizer(identity2(), doubled, 4.0), ValidationError);
  doubled.N = 2;
  CHECK_NOTHROW(verify_normalizer(identity2(), doubled, 4.0));
}

TEST_CASE("entry product over an all-odd orbit keeps an odd witness") {
  Mat v(3, 3);
  v << 1, 1, 1, 1, 3, 1, 1, 1, 3;
  CHECK(det_exact(v) == 4);
  PolynomialOnV prod = PolynomialOnV::constant(3, 1);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) prod = prod * entry_poly(3, i, j);
  prod.t = 9;
  PrimitivityReport rep = weak_primitivity(v, prod, 3.0, 3);
  CHECK(rep.probed_gcd % 2 == 1);
  bool saw2 = false;
  for (const auto& [p, witness] : rep.witnesses) {
    if (p == 2) {
      saw2 = witness.has_value();
    }
  }
  CHECK(saw2);
}

TEST_CASE("sieve dimension scan stays within the square-root envelope") {
  DimensionScan scan1 = sieve_dimension_scan(identity2(), entry_poly(2, 1, 1), 13);
  CHECK(!scan1.degenerate);
  for (const DimensionRow& row : scan1.rows) {
    CHECK(row.scaled_dev <= 2.0);
  }
  PolynomialOnV prod = entry_poly(2, 1, 1) * entry_poly(2, 2, 2);
  prod.t = 2;
  DimensionScan scan2 = sieve_dimension_scan(identity2(), prod, 13);
  for (const DimensionRow& row : scan2.rows) {
    CHECK(row.scaled_dev <= 2.0);
  }
  DimensionScan flat = sieve_dimension_scan(identity2(), PolynomialOnV::constant(2, 5), 7);
  CHECK(flat.degenerate);
}

TEST_CASE("singular series factors for the first entry are exactly one") {
  SingularSeries ss = singular_series_partial(identity2(), entry_poly(2, 1, 1), 1, 13);
  CHECK(ss.product == Rational(1));
  CHECK(!ss.factors.empty());
  for (const auto& [p, factor] : ss.factors) {
    CHECK(factor == Rational(1));
  }
  CHECK(ss.skipped.empty());
}

TEST_CASE("counts of fixed-determinant matrices over small prime fields") {
  CHECK(variety_count_mod_p(1, 2, 3) == 24);
  CHECK(variety_count_mod_p(3, 2, 3) == 33);
  CHECK(variety_count_mod_p(1, 2, 5) == 120);
  CHECK(variety_count_mod_p(2, 2, 5) == 120);
  CHECK(variety_count_mod_p(1, 3, 2) == 168);
  CHECK(variety_count_mod_p(0, 3, 2) == 512 - 168);
  // (27-1)(27-3)(27-9) invertible matrices split evenly over the two nonzero classes
  CHECK(variety_count_mod_p(1, 3, 3) == 5616);
  CHECK_THROWS_AS(variety_count_mod_p(1, 2, 6), ValidationError);
}

TEST_CASE("density tables answer lookups and refuse unknown moduli") {
  DensityTable table = build_density_table(identity2(), entry_poly(2, 1, 1), {1, 2, 3, 6});
  CHECK(table.rows.size() == 4);
  const Rational* two = table.find(2);
  REQUIRE(two != nullptr);
  CHECK(*two == Rational(2, 3));
  CHECK(table.find(5) == nullptr);
}
