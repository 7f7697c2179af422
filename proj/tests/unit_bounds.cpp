#include "detsieve/bound_calculator.hpp"

#include <cmath>

#include "detsieve/errors.hpp"
#include "doctest.h"

using namespace detsieve;

TEST_CASE("group data for small unimodular groups") {
  GroupData g2 = sl_n_group_data(2);
  CHECK(g2.dim_G == 3);
  CHECK(g2.a == Rational(2));
  CHECK(g2.n_e == 2);
  CHECK(!g2.p.has_value());

  GroupData g3 = sl_n_group_data(3);
  CHECK(g3.dim_G == 8);
  CHECK(g3.a == Rational(6));
  CHECK(g3.n_e == 2);
  REQUIRE(g3.p.has_value());
  CHECK(*g3.p == Rational(4));

  GroupData g4 = sl_n_group_data(4);
  CHECK(g4.dim_G == 15);
  CHECK(g4.a == Rational(12));
  CHECK(g4.n_e == 4);
  REQUIRE(g4.p.has_value());
  CHECK(*g4.p == Rational(6));

  GroupData g5 = sl_n_group_data(5);
  CHECK(g5.dim_G == 24);
  CHECK(g5.a == Rational(20));
  CHECK(g5.n_e == 4);
  CHECK_THROWS_AS(sl_n_group_data(1), ValidationError);
}

TEST_CASE("even integrability index from the exponent") {
  CHECK(ne_from_p(Rational(4)) == 2);
  CHECK(ne_from_p(Rational(6)) == 4);
  CHECK(ne_from_p(Rational(28, 9)) == 2);
  CHECK(ne_from_p(Rational(64, 25)) == 2);
  CHECK(ne_from_p(Rational(8)) == 4);
}

TEST_CASE("expansion exponents for the unimodular series") {
  CHECK(theta(sl_n_group_data(2)) == Rational(1, 2));
  CHECK(theta(sl_n_group_data(3)) == Rational(3, 2));
  CHECK(theta(sl_n_group_data(4)) == Rational(3, 2));
  CHECK(level_tau(sl_n_group_data(2)) == Rational(1, 64));
  CHECK(level_tau(sl_n_group_data(3)) == Rational(1, 324));
  CHECK(level_tau(sl_n_group_data(4)) == Rational(1, 2048));
  CHECK(alpha_exponent(sl_n_group_data(3), 1) == Rational(1, 2916));
  CHECK(alpha_exponent(sl_n_group_data(3), 2) == Rational(1, 5832));
  CHECK_THROWS_AS(alpha_exponent(sl_n_group_data(3), 0), ValidationError);
}

TEST_CASE("general saturation threshold is exact in integers") {
  RBound b3 = r_bound_general(sl_n_group_data(3), SieveParams{1, 1});
  CHECK(b3.threshold == Rational(486));
  CHECK(b3.r0_upper == 487);

  RBound b2 = r_bound_general(sl_n_group_data(2), SieveParams{1, 1});
  CHECK(b2.threshold == Rational(288));
  CHECK(b2.r0_upper == 289);

  RBound b3d2 = r_bound_general(sl_n_group_data(3), SieveParams{1, 2});
  CHECK(b3d2.threshold == Rational(972));
  CHECK(b3d2.r0_upper == 973);

  RBound b3t2 = r_bound_general(sl_n_group_data(3), SieveParams{2, 1});
  CHECK(b3t2.threshold == Rational(972));
}

TEST_CASE("the cubed-index variant disagrees with the general threshold for n = 3") {
  CHECK(r_bound_ne_cubed_variant(3, SieveParams{1, 1}) == Rational(144));
  CHECK(r_bound_ne_cubed_variant(4, SieveParams{1, 1}) == Rational(1152));
  CHECK(r_bound_ne_cubed_variant(5, SieveParams{1, 1}) == Rational(1152));
  CHECK(r_bound_ne_cubed_variant(3, SieveParams{1, 1}) !=
        r_bound_general(sl_n_group_data(3), SieveParams{1, 1}).threshold);
}

TEST_CASE("smooth-case threshold uses the known integrability exponent") {
  CHECK(r_bound_smooth(sl_n_group_data(3), SieveParams{1, 1}) == Rational(48));
  GroupData quat{3, Rational(2), 0, 2, Rational(64, 25)};
  CHECK(r_bound_smooth(quat, SieveParams{1, 1}) == Rational(864, 25));
  GroupData flat{3, Rational(2), 0, 2, Rational(2)};
  CHECK(r_bound_smooth(flat, SieveParams{1, 1}) == Rational(27));
  CHECK_THROWS_AS(r_bound_smooth(sl_n_group_data(2), SieveParams{1, 1}), ValidationError);
}

TEST_CASE("weighted thresholds match their frozen decimal expansions") {
  GroupData g3 = sl_n_group_data(3);
  double printed = r_bound_weighted(*g3.p, g3.dim_G, g3.a, SieveParams{1, 1});
  CHECK(printed == doctest::Approx(11.6893).epsilon(0.0001));

  double published = r_bound_weighted_sln(3, SieveParams{1, 1});
  CHECK(published == doctest::Approx(13.0226).epsilon(0.0001));
  CHECK(r_bound_weighted_sln(4, SieveParams{1, 1}) ==
        doctest::Approx(16.0 - 2.0 + 2.0 * std::log(4.0) + 0.25).epsilon(1e-9));
  CHECK_THROWS_AS(r_bound_weighted_sln(2, SieveParams{1, 1}), ValidationError);

  // the free-weight form at weight one sits mu/(4t) below the printed bound
  double mu = (4.0 * 8.0) / 6.0;
  double free_w = weighted_sieve_threshold(mu, 1, 1.0);
  CHECK(printed - free_w == doctest::Approx(mu / 4.0).epsilon(1e-9));
  CHECK_THROWS_AS(weighted_sieve_threshold(mu, 1, 4.0), ValidationError);
  CHECK_THROWS_AS(weighted_sieve_threshold(mu, 1, 0.0), ValidationError);
  CHECK_THROWS_AS(weighted_sieve_threshold(mu, 0, 1.0), ValidationError);
}

TEST_CASE("division-algebra saturation thresholds and their floors") {
  R0Division d2 = r0_division_algebra(2, SieveParams{1, 1});
  CHECK(d2.p_n == Rational(64, 25));
  CHECK(d2.threshold == doctest::Approx(9.4526).epsilon(0.00006));
  CHECK(d2.r0_upper == 9);

  R0Division d3 = r0_division_algebra(3, SieveParams{1, 1});
  CHECK(d3.p_n == Rational(28, 9));
  CHECK(d3.threshold == doctest::Approx(10.0689).epsilon(0.00006));
  CHECK(d3.r0_upper == 10);

  R0Division d5 = r0_division_algebra(5, SieveParams{1, 1});
  CHECK(d5.p_n == Rational(3));
  CHECK(d5.threshold == doctest::Approx(8.9726).epsilon(0.00006));
  CHECK(d5.r0_upper == 8);

  CHECK_THROWS_AS(r0_division_algebra(4, SieveParams{1, 1}), ValidationError);
  CHECK_THROWS_AS(r0_division_algebra(1, SieveParams{1, 1}), ValidationError);
}

TEST_CASE("uniform conjectural shape") {
  CHECK(r0_uniform_shape(SieveParams{1, 1}) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(r0_uniform_shape(SieveParams{2, 3}) ==
        doctest::Approx(18.0 + 2.0 * std::log(2.0)).epsilon(1e-12));
}
