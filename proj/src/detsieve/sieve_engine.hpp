#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "local_densities.hpp"
#include "orbit_enum.hpp"

namespace detsieve {

// multiplicities a_k = #{orbit points x in the ball : |f(x)| = k}; the k = 0
// mass is kept aside and never sifted
struct SiftSequence {
  double T = 1.0;
  std::map<std::int64_t, std::int64_t> a;
  std::int64_t a0 = 0;
  std::int64_t X = 0;  // total sifted mass, sum of a_k for k >= 1
};

SiftSequence build_sequence(const Mat& v, const PolynomialOnV& f, const NormSpec& norm,
                            const EnumBudget& budget = {});

// sum of a_k over k >= 1 divisible by d
std::int64_t progression_sum(const SiftSequence& seq, std::int64_t d);

// exact difference between the divisible mass and its density prediction (rho(d)/d) X
Rational remainder_term(const SiftSequence& seq, std::int64_t d, const DensityTable& rho);

// mass of k >= 1 coprime to every prime <= z outside the exempt set
std::int64_t legendre_sift(const SiftSequence& seq, double z,
                           const std::set<std::int64_t>& exempt = {});

namespace internal {
std::int64_t sift_moebius(const SiftSequence& seq, const std::vector<std::int64_t>& primes);
std::int64_t sift_direct(const SiftSequence& seq, const std::vector<std::int64_t>& primes);
}  // namespace internal

struct LevelScanRow {
  double D = 1.0;
  double remainder_sum = 0.0;  // sum of |R(d)| over squarefree d <= D
  double ratio_to_mass = 0.0;
};

std::vector<LevelScanRow> level_scan(const SiftSequence& seq, const DensityTable& rho,
                                     const std::vector<double>& D_grid);

// points of the whole determinant-m variety where every factor value is a positive prime
std::int64_t pi_count(std::int64_t m, int n, const std::vector<PolynomialOnV>& factors,
                      const NormSpec& norm, const EnumBudget& budget = {});

// points with f nonzero and at most r prime factors counted with multiplicity
std::int64_t almost_prime_count(std::int64_t m, int n, const PolynomialOnV& f,
                                const NormSpec& norm, int r, const EnumBudget& budget = {});

struct ShapeRow {
  double T = 1.0;
  std::int64_t prime_points = 0;
  std::int64_t total_points = 0;
  double ratio = 0.0;  // prime_points * (log T)^t / total_points
};

std::vector<ShapeRow> conjecture_shape(std::int64_t m, int n,
                                       const std::vector<PolynomialOnV>& factors,
                                       NormSpec::Kind kind, const std::vector<double>& grid,
                                       const EnumBudget& budget = {});

}  // namespace detsieve
