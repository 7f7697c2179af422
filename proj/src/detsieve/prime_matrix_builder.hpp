#pragma once

#include <cstdint>
#include <vector>

#include "intmat.hpp"
#include "orbit_enum.hpp"

namespace detsieve {

// first n-1 rows of the matrix under construction; every entry a positive prime
struct PartialFrame {
  int n = 3;
  Mat rows;  // (n-1) x n
};

// A[j] = determinant of the frame with column j+1 struck
struct MinorVector {
  std::vector<std::int64_t> A;
};

// sum over j of (-1)^(j+1) A_j s_j = A0, unknowns s_j positive primes
struct LinearPrimeEquation {
  std::int64_t A0 = 0;
  MinorVector A;
};

struct FrameCheck {
  bool ok = false;
  std::string detail;
};

MinorVector minors(const PartialFrame& frame);

// gcd of the minors is exactly 2^(n-2), none vanish, and their sum is 0 mod 2^(n-1)
FrameCheck check_frame(const PartialFrame& frame);

PartialFrame build_frame(int n, std::uint64_t seed, std::int64_t search_bound = 1 << 22);

// necessary gcd and parity conditions for prime solutions of the linear equation
bool vinogradov_local_check(std::int64_t A0, const MinorVector& A);

// all solution vectors with every coordinate a positive prime <= T, lexicographic
std::vector<std::vector<std::int64_t>> solve_prime_equation(const LinearPrimeEquation& eq,
                                                            std::int64_t T,
                                                            const EnumBudget& budget = {});

struct SolutionSeriesRow {
  std::int64_t T = 0;
  std::int64_t count = 0;
  double normalized = 0.0;  // count * (log T)^n / T^(n-1)
};

std::vector<SolutionSeriesRow> count_solutions_series(const LinearPrimeEquation& eq,
                                                      const std::vector<std::int64_t>& grid,
                                                      const EnumBudget& budget = {});

struct BuildOptions {
  std::int64_t search_bound = 1 << 22;   // Dirichlet scan start for column primes
  std::int64_t solver_T_start = 1 << 17;
  std::int64_t solver_T_cap = 1ll << 27;
  int max_frame_attempts = 32;
  bool allow_n4 = false;
  std::int64_t solver_visit_budget = 2'000'000'000;
};

struct BuildResult {
  Mat x;  // n x n, every entry a positive prime, determinant exactly 2^(n-1)
  PartialFrame frame;
  LinearPrimeEquation eq;
  std::vector<std::int64_t> top_row;
  std::int64_t solver_T = 0;
  int frame_attempts = 1;
};

BuildResult build_prime_matrix(int n, std::uint64_t seed, const BuildOptions& opts = {});

// true when the determinant obstruction holds: either some entry is even, or
// the determinant is divisible by 2^(n-1)
bool necessity_check(const Mat& x);

namespace frame_detail {

// residue classes mod 4 (1 or 3) for the middle-column primes, given the minors of
// the trailing block; index 0 corresponds to row label 2
std::vector<int> xi_residue_classes(const std::vector<std::int64_t>& C, int n);

// lexicographically first tuple in [1, p-1]^k with alternating-weighted sum nonzero mod p
std::vector<std::int64_t> first_nonvanishing_tuple(const std::vector<std::int64_t>& C,
                                                   std::int64_t p);

// smallest odd prime dividing neither value in avoid_divisors nor equal to any avoid_value
std::int64_t pick_aux_prime(const std::vector<std::int64_t>& avoid_divisors,
                            const std::vector<std::int64_t>& avoid_values);

}  // namespace frame_detail

}  // namespace detsieve
