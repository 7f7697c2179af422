#pragma once

#include <cstdint>
#include <optional>

#include "rational.hpp"

namespace detsieve {

// spectral and volume data of the acting group needed by the exponent formulas
struct GroupData {
  int dim_G = 3;
  Rational a{2};            // ball volume growth exponent
  int b = 0;                // log power attached to the volume growth
  int n_e = 2;              // least even integer >= p/2
  std::optional<Rational> p;  // integrability exponent, when known
};

struct SieveParams {
  int t = 1;
  int deg_f = 1;
  std::optional<double> rho_w;  // free sieve weight, must lie in (0, 4t)
};

GroupData sl_n_group_data(int n);

// least even integer >= p/2
int ne_from_p(const Rational& p);

Rational theta(const GroupData& gd);
Rational level_tau(const GroupData& gd);
Rational alpha_exponent(const GroupData& gd, int t);

struct RBound {
  Rational threshold;       // admissible r must exceed this
  std::int64_t r0_upper;    // least integer strictly above the threshold
};

RBound r_bound_general(const GroupData& gd, const SieveParams& sp);

// alternate published exponent 18 t n_e^3 deg with n_e the least even integer >= n-1;
// disagrees with r_bound_general for odd n >= 3 and is exposed only as a variant
Rational r_bound_ne_cubed_variant(int n, const SieveParams& sp);

// sharper threshold available when the full integrability exponent p is known
Rational r_bound_smooth(const GroupData& gd, const SieveParams& sp);

// weighted-sieve threshold with free weight rho_w and capacity nu_t = 4t, taking the
// level quotient mu directly
double weighted_sieve_threshold(double mu, int t, double rho_w);

// printed weight-one specialization: 2 p dimG deg / a - 1 + (t+1) log(4t) - t + 1/4
double r_bound_weighted(const Rational& p, int dim_G, const Rational& a,
                        const SieveParams& sp);

// published unimodular-group form 4 n deg - 1 + (t+1) log(4t) - t + 1/4, n >= 3
double r_bound_weighted_sln(int n, const SieveParams& sp);

struct R0Division {
  double threshold = 0.0;
  std::int64_t r0_upper = 0;  // floor of the threshold
  Rational p_n{1};
};

// saturation bound for the quaternionic family; n must be prime
R0Division r0_division_algebra(int n, const SieveParams& sp);

// conjectural shape 6 deg + t log t
double r0_uniform_shape(const SieveParams& sp);

}  // namespace detsieve
