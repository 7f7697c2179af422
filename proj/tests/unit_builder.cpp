#include "detsieve/prime_matrix_builder.hpp"

#include <numeric>
#include <set>

#include "detsieve/arithmetic.hpp"
#include "detsieve/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace detsieve;

namespace {

PartialFrame frame_from(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  PartialFrame f;
  f.n = static_cast<int>(rows.begin()->size());
  f.rows = Mat(static_cast<int>(rows.size()), f.n);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (std::int64_t v : row) f.rows(i, j++) = v;
    ++i;
  }
  return f;
}

}  // namespace

TEST_CASE("column minors of a partial frame") {
  MinorVector mv = minors(frame_from({{3, 5}}));
  CHECK(mv.A == std::vector<std::int64_t>{5, 3});

  MinorVector mv3 = minors(frame_from({{3, 5, 7}, {11, 13, 17}}));
  CHECK(mv3.A == std::vector<std::int64_t>{-6, -26, -16});

  MinorVector degenerate = minors(frame_from({{1, 1, 2}, {3, 3, 4}}));
  CHECK(degenerate.A[2] == 0);
}

TEST_CASE("frame acceptance checks parity, gcd, and primality") {
  CHECK(check_frame(frame_from({{3, 5}})).ok);
  CHECK(check_frame(frame_from({{3, 7}})).ok);
  FrameCheck bad = check_frame(frame_from({{2, 3}}));
  CHECK(!bad.ok);
  FrameCheck notprime = check_frame(frame_from({{4, 5}}));
  CHECK(!notprime.ok);
  CHECK(notprime.detail.find("(0") != std::string::npos);
}

TEST_CASE("the hand-checked 3x3 frame passes with its frozen minors") {
  PartialFrame f = frame_from({{113, 5, 3}, {2381, 13, 5}});
  MinorVector mv = minors(f);
  CHECK(mv.A == std::vector<std::int64_t>{-14, -6578, -10436});
  FrameCheck chk = check_frame(f);
  CHECK(chk.ok);
  // alternating minor sum divisible by 4, pairwise gcd structure at 2
  CHECK((-14 - 6578 - 10436) % 4 == 0);
  CHECK(std::gcd(std::int64_t{14}, std::int64_t{6578}) == 2);
  CHECK(std::gcd(std::gcd(std::int64_t{14}, std::int64_t{6578}), std::int64_t{10436}) == 2);
}

TEST_CASE("middle-column residue classes reproduce the worked example") {
  CHECK(frame_detail::xi_residue_classes({5, 3}, 3) == std::vector<int>{1, 1});
  std::vector<int> swapped = frame_detail::xi_residue_classes({3, 5}, 3);
  CHECK(swapped == std::vector<int>{3, 3});
  // whatever classes come back, the alternating sum must sit at 2 mod 4
  auto check_classes = [](const std::vector<std::int64_t>& C, int n) {
    std::vector<int> cls = frame_detail::xi_residue_classes(C, n);
    std::int64_t s = 0;
    for (std::size_t j = 0; j < C.size(); ++j) {
      std::int64_t term = static_cast<std::int64_t>(cls[j]) * C[j];
      s += (j % 2 == 0) ? term : -term;
    }
    std::int64_t shift = n - 3;
    std::int64_t unit = std::int64_t{1} << shift;
    CHECK(((s % (4 * unit)) + 4 * unit) % (4 * unit) == 2 * unit);
  };
  check_classes({5, 3}, 3);
  check_classes({3, 5}, 3);
  check_classes({7, 13}, 3);
  check_classes({10, 6, 4}, 4);
  check_classes({-14, -6578, -10436}, 4);
  // an odd number of odd reduced minors cannot hit the target parity
  CHECK_THROWS_AS(frame_detail::xi_residue_classes({10, 6, 2}, 4), ValidationError);
}

TEST_CASE("first nonvanishing tuple is lexicographically minimal") {
  CHECK(frame_detail::first_nonvanishing_tuple({5, 3}, 7) ==
        std::vector<std::int64_t>{1, 1});
  CHECK(frame_detail::first_nonvanishing_tuple({1, 1}, 3) ==
        std::vector<std::int64_t>{1, 2});
  CHECK_THROWS_AS(frame_detail::first_nonvanishing_tuple({7, 14}, 7), SearchExhausted);
}

TEST_CASE("auxiliary prime avoids listed divisors and values") {
  CHECK(frame_detail::pick_aux_prime({-14}, {3, 5}) == 11);
  CHECK(frame_detail::pick_aux_prime({}, {}) == 3);
  CHECK(frame_detail::pick_aux_prime({15}, {}) == 7);
}

TEST_CASE("local solvability check for signed prime equations") {
  CHECK(vinogradov_local_check(4, MinorVector{{1, 1, 2}}));
  CHECK(!vinogradov_local_check(0, MinorVector{{1, 1, 1}}));
  CHECK(!vinogradov_local_check(4, MinorVector{{2, 2, 2}}));
  CHECK(vinogradov_local_check(4, MinorVector{{-14, -6578, -10436}}));
  CHECK(!vinogradov_local_check(4, MinorVector{{0, 1, 1}}));
}

TEST_CASE("prime equation solver matches the brute tuple scan") {
  LinearPrimeEquation eq{4, MinorVector{{1, 1, 2}}};
  for (std::int64_t T : {10, 30, 60}) {
    CHECK(solve_prime_equation(eq, T) == oracle::prime_tuple_scan(4, {1, 1, 2}, T));
  }
  auto sols = solve_prime_equation(eq, 10);
  REQUIRE(!sols.empty());
  CHECK(sols.front() == std::vector<std::int64_t>{2, 2, 2});
  bool has353 = false;
  for (const auto& s : sols) {
    if (s == std::vector<std::int64_t>{3, 5, 3}) has353 = true;
  }
  CHECK(has353);
  CHECK(solve_prime_equation(eq, 2) ==
        std::vector<std::vector<std::int64_t>>{{2, 2, 2}});

  LinearPrimeEquation eq2{8, MinorVector{{3, 5, 2}}};
  CHECK(solve_prime_equation(eq2, 40) == oracle::prime_tuple_scan(8, {3, 5, 2}, 40));

  LinearPrimeEquation quad{8, MinorVector{{1, 1, 1, 3}}};
  CHECK(solve_prime_equation(quad, 20) == oracle::prime_tuple_scan(8, {1, 1, 1, 3}, 20));

  CHECK_THROWS_AS(solve_prime_equation(LinearPrimeEquation{2, MinorVector{{1, 1}}}, 10),
                  ValidationError);
  CHECK_THROWS_AS(solve_prime_equation(eq, 1 << 20, EnumBudget{5}), BudgetError);
}

TEST_CASE("solution counting series normalizes against the expected scale") {
  LinearPrimeEquation eq{4, MinorVector{{1, 1, 2}}};
  auto rows = count_solutions_series(eq, {10, 30});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].count ==
        static_cast<std::int64_t>(oracle::prime_tuple_scan(4, {1, 1, 2}, 10).size()));
  CHECK(rows[1].count ==
        static_cast<std::int64_t>(oracle::prime_tuple_scan(4, {1, 1, 2}, 30).size()));
  CHECK(rows[0].T == 10);
  CHECK(rows[1].T == 30);
  CHECK_THROWS_AS(count_solutions_series(eq, {}), ValidationError);
}

TEST_CASE("random frames verify for both supported dimensions") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 17ull}) {
    PartialFrame f2 = build_frame(2, seed);
    CHECK(f2.rows.rows() == 1);
    CHECK(check_frame(f2).ok);
    PartialFrame f3 = build_frame(3, seed);
    CHECK(f3.rows.rows() == 2);
    CHECK(check_frame(f3).ok);
    MinorVector mv = minors(f3);
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < mv.A.size(); ++j) sum += (j % 2 == 0) ? mv.A[j] : -mv.A[j];
    // the alternating minor sum is what the final prime row must hit times the gcd scale
    CHECK(sum % 4 == 0);
  }
}

TEST_CASE("a full 3x3 build yields nine primes with determinant four") {
  BuildResult res = build_prime_matrix(3, 7);
  CHECK(res.x.rows() == 3);
  CHECK(det_exact(res.x) == 4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      CHECK(res.x(i, j) > 0);
      CHECK(oracle::is_prime_trial(res.x(i, j)));
    }
  }
  CHECK(check_frame(res.frame).ok);
  CHECK(vinogradov_local_check(res.eq.A0, res.eq.A));
  // the returned top row solves the equation exactly
  i128 s = 0;
  for (std::size_t j = 0; j < res.top_row.size(); ++j) {
    i128 term = static_cast<i128>(res.eq.A.A[j]) * res.top_row[j];
    s += (j % 2 == 0) ? term : -term;
  }
  CHECK(s == 4);
}

TEST_CASE("build rejections are typed") {
  CHECK_THROWS_AS(build_prime_matrix(2, 1), ValidationError);
  CHECK_THROWS_AS(build_prime_matrix(4, 1), ValidationError);
  BuildOptions starved;
  starved.solver_T_cap = 4;  // below the starting level, so no solve is attempted
  starved.max_frame_attempts = 2;
  CHECK_THROWS_AS(build_prime_matrix(3, 1, starved), SearchExhausted);
}

TEST_CASE("determinant obstruction holds for every odd matrix checked") {
  Mat allodd(2, 2);
  allodd << 1, 1, 1, 3;
  CHECK(necessity_check(allodd));
  Mat big(3, 3);
  big << 3, 5, 7, 11, 13, 17, 19, 23, 29;
  CHECK(necessity_check(big));
  Mat withEven(3, 3);
  withEven << 2, 5, 7, 11, 13, 17, 19, 23, 29;
  CHECK(necessity_check(withEven));
}
