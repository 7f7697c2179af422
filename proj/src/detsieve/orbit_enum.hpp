#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "intmat.hpp"

namespace detsieve {

struct EnumBudget {
  std::int64_t max_visits = 1'000'000'000;
};

// coset representatives of the unimodular row-action on fixed-determinant matrices:
// upper triangular, positive diagonal, entries above a pivot reduced mod that pivot
struct OrbitDecomposition {
  std::int64_t m = 1;
  int n = 2;
  std::vector<Mat> reps;
};

struct CountSeries {
  std::int64_t m = 1;
  int n = 2;
  NormSpec::Kind kind = NormSpec::Kind::MaxEntry;
  std::vector<std::pair<double, std::int64_t>> grid;  // (T, count)
};

struct GrowthFit {
  double exponent = 0.0;   // fitted slope of log count against log T
  double leading = 0.0;    // exp of the fitted intercept
  double rms_residual = 0.0;
};

// visits every integer n x n matrix of determinant m inside the norm ball, each once,
// in a fixed deterministic order
void enumerate_points(std::int64_t m, int n, const NormSpec& norm,
                      const std::function<void(const Mat&)>& sink,
                      const EnumBudget& budget = {});

std::vector<Mat> collect_points(std::int64_t m, int n, const NormSpec& norm,
                                const EnumBudget& budget = {});

std::int64_t count_points(std::int64_t m, int n, const NormSpec& norm,
                          const EnumBudget& budget = {});

GrowthFit fit_growth_exponent(const CountSeries& series);

OrbitDecomposition hnf_orbit_reps(std::int64_t m, int n);

// canonical form of x under determinant-one integer row operations; det x must be positive
Mat hnf_of(const Mat& x);

// index into decomposition.reps of the orbit containing x
int orbit_of(const Mat& x, const OrbitDecomposition& decomposition);

// count of unimodular w with w = y (mod q) inside the norm ball (2x2 only)
std::int64_t congruence_coset_count(std::int64_t q, const Mat& y, const NormSpec& norm,
                                    const EnumBudget& budget = {});

// order of the unimodular group over Z/qZ via closure under elementary row additions
std::int64_t congruence_index(int n, std::int64_t q, std::int64_t state_cap = 20'000'000);

struct UniformityRow {
  double T = 0.0;
  std::int64_t total = 0;
  std::vector<std::int64_t> coset_counts;
  double max_deviation = 0.0;
};

struct UniformityReport {
  std::int64_t q = 1;
  std::int64_t index = 1;
  std::vector<Mat> coset_reps;  // residue matrices mod q, lexicographically sorted
  std::vector<UniformityRow> rows;
};

UniformityReport uniformity_report(std::int64_t q, const std::vector<double>& T_grid,
                                   NormSpec::Kind kind, const EnumBudget& budget = {});

namespace internal {

// packs entries of an n x n residue matrix into a 64-bit key; requires n^2 * bits <= 64
int pack_bits_for(std::int64_t q, int n);
std::uint64_t pack_residue(const Mat& x, int bits);
Mat unpack_residue(std::uint64_t key, int n, int bits);

}  // namespace internal

}  // namespace detsieve
