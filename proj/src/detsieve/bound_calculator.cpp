#include "bound_calculator.hpp"

#include <cmath>

#include "arithmetic.hpp"
#include "errors.hpp"

namespace detsieve {

namespace {

void validate_params(const SieveParams& sp) {
  if (sp.t < 1) throw ValidationError("factor count t must be at least 1");
  if (sp.deg_f < 1) throw ValidationError("degree must be at least 1");
  if (sp.rho_w) {
    if (!(*sp.rho_w > 0.0) || !(*sp.rho_w < 4.0 * sp.t)) {
      throw ValidationError("sieve weight must lie in (0, 4t)");
    }
  }
}

void validate_group(const GroupData& gd) {
  if (gd.dim_G < 1) throw ValidationError("group dimension must be positive");
  if (!(gd.a > Rational(0))) throw ValidationError("growth exponent must be positive");
  if (gd.n_e < 2 || gd.n_e % 2 != 0) throw ValidationError("n_e must be a positive even integer");
}

}  // namespace

GroupData sl_n_group_data(int n) {
  if (n < 2) throw ValidationError("unimodular group needs n >= 2");
  GroupData gd;
  gd.dim_G = n * n - 1;
  gd.a = Rational(static_cast<i128>(n) * n - n);
  gd.b = 0;
  if (n == 2) {
    // the n = 2 spectral bound is only estimated; the even exponent 2 is safe
    gd.n_e = 2;
    gd.p = std::nullopt;
  } else {
    gd.p = Rational(2 * (n - 1));
    gd.n_e = (n % 2 == 1) ? n - 1 : n;
  }
  return gd;
}

int ne_from_p(const Rational& p) {
  if (!(p > Rational(0))) throw ValidationError("integrability exponent must be positive");
  Rational half = p / Rational(2);
  int k = 2;
  while (Rational(k) < half) k += 2;
  return k;
}

Rational theta(const GroupData& gd) {
  validate_group(gd);
  return gd.a / Rational(2 * gd.n_e);
}

Rational level_tau(const GroupData& gd) {
  validate_group(gd);
  i128 s = static_cast<i128>(1 + gd.dim_G) * (1 + gd.dim_G) * 2 * gd.n_e;
  return Rational(1, s);
}

Rational alpha_exponent(const GroupData& gd, int t) {
  validate_group(gd);
  if (t < 1) throw ValidationError("factor count t must be at least 1");
  i128 s = static_cast<i128>(9) * t * (1 + gd.dim_G) * (1 + gd.dim_G) * 2 * gd.n_e;
  return Rational(1, s);
}

RBound r_bound_general(const GroupData& gd, const SieveParams& sp) {
  validate_group(gd);
  validate_params(sp);
  Rational threshold = Rational(static_cast<i128>(9) * sp.t * (1 + gd.dim_G) * (1 + gd.dim_G) *
                                2 * gd.n_e * sp.deg_f) /
                       gd.a;
  // least integer strictly above: floor + 1 both for integral and fractional thresholds
  i128 fl = threshold.num() >= 0 ? threshold.num() / threshold.den()
                                 : -((-threshold.num() + threshold.den() - 1) / threshold.den());
  RBound rb;
  rb.threshold = threshold;
  rb.r0_upper = static_cast<std::int64_t>(fl) + 1;
  return rb;
}

Rational r_bound_ne_cubed_variant(int n, const SieveParams& sp) {
  if (n < 2) throw ValidationError("unimodular group needs n >= 2");
  validate_params(sp);
  int ne = (n - 1) + ((n - 1) % 2);  // least even integer >= n - 1
  return Rational(static_cast<i128>(18) * sp.t * ne * ne * ne * sp.deg_f);
}

Rational r_bound_smooth(const GroupData& gd, const SieveParams& sp) {
  validate_group(gd);
  validate_params(sp);
  if (!gd.p) throw ValidationError("integrability exponent unavailable for this group");
  return Rational(static_cast<i128>(9) * sp.t * gd.dim_G * sp.deg_f) * (*gd.p) / gd.a;
}

double weighted_sieve_threshold(double mu, int t, double rho_w) {
  if (t < 1) throw ValidationError("factor count t must be at least 1");
  double nu = 4.0 * t;
  if (!(rho_w > 0.0) || !(rho_w < nu)) throw ValidationError("sieve weight must lie in (0, 4t)");
  return (1.0 + rho_w - rho_w / nu) * mu - 1.0 + (t + rho_w) * std::log(nu / rho_w) - t +
         rho_w * t / nu;
}

double r_bound_weighted(const Rational& p, int dim_G, const Rational& a,
                        const SieveParams& sp) {
  validate_params(sp);
  if (dim_G < 1) throw ValidationError("group dimension must be positive");
  if (!(a > Rational(0))) throw ValidationError("growth exponent must be positive");
  if (!(p > Rational(0))) throw ValidationError("integrability exponent must be positive");
  double mu = (p * Rational(dim_G) * Rational(sp.deg_f) / a).to_double();
  double t = sp.t;
  return 2.0 * mu - 1.0 + (t + 1.0) * std::log(4.0 * t) - t + 0.25;
}

double r_bound_weighted_sln(int n, const SieveParams& sp) {
  if (n < 3) throw ValidationError("published unimodular form needs n >= 3");
  validate_params(sp);
  double t = sp.t;
  return 4.0 * n * sp.deg_f - 1.0 + (t + 1.0) * std::log(4.0 * t) - t + 0.25;
}

R0Division r0_division_algebra(int n, const SieveParams& sp) {
  validate_params(sp);
  if (n < 2 || !is_prime(n)) {
    throw ValidationError("division-algebra family needs a prime degree");
  }
  R0Division out;
  if (n == 2) {
    out.p_n = Rational(64, 25);
  } else if (n == 3) {
    out.p_n = Rational(28, 9);
  } else {
    out.p_n = Rational(2 * (n + 1), n - 1);
  }
  double t = sp.t;
  double lead = (Rational(2) * out.p_n * Rational(n + 1, n) * Rational(sp.deg_f)).to_double();
  out.threshold = lead + (t + 1.0) * std::log(4.0 * t) - t;
  out.r0_upper = static_cast<std::int64_t>(std::floor(out.threshold));
  return out;
}

double r0_uniform_shape(const SieveParams& sp) {
  validate_params(sp);
  double t = sp.t;
  return 6.0 * sp.deg_f + t * std::log(t);
}

}  // namespace detsieve
