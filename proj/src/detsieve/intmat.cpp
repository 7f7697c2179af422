#include "intmat.hpp"

#include <cmath>

#include "errors.hpp"

namespace detsieve {

NormSpec::Kind norm_kind_from_string(const std::string& s) {
  if (s == "max") return NormSpec::Kind::MaxEntry;
  if (s == "frobenius" || s == "frob") return NormSpec::Kind::Frobenius;
  throw ValidationError("unknown norm kind: " + s);
}

std::string norm_kind_to_string(NormSpec::Kind k) {
  return k == NormSpec::Kind::MaxEntry ? "max" : "frobenius";
}

namespace {

i128 det_rec(const Mat& x, std::uint32_t cols_mask, int row) {
  const int n = static_cast<int>(x.rows());
  if (row == n - 1) {
    for (int j = 0; j < n; ++j) {
      if (cols_mask & (1u << j)) return static_cast<i128>(x(row, j));
    }
    return 0;
  }
  i128 acc = 0;
  int sign = 1;
  for (int j = 0; j < n; ++j) {
    if (!(cols_mask & (1u << j))) continue;
    if (x(row, j) != 0) {
      i128 sub = det_rec(x, cols_mask & ~(1u << j), row + 1);
      acc += sign * static_cast<i128>(x(row, j)) * sub;
    }
    sign = -sign;
  }
  return acc;
}

}  // namespace

i128 det_exact(const Mat& x) {
  if (x.rows() != x.cols()) throw ValidationError("det_exact: matrix not square");
  const int n = static_cast<int>(x.rows());
  if (n < 1 || n > 4) throw ValidationError("det_exact: dimension out of range");
  return det_rec(x, (1u << n) - 1, 0);
}

std::int64_t max_entry_norm(const Mat& x) {
  std::int64_t best = 0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      std::int64_t a = x(i, j) < 0 ? -x(i, j) : x(i, j);
      if (a > best) best = a;
    }
  }
  return best;
}

std::int64_t frobenius_sq(const Mat& x) {
  std::int64_t s = 0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) s += x(i, j) * x(i, j);
  }
  return s;
}

std::int64_t norm_box_bound(const NormSpec& norm) {
  if (!(norm.T >= 1.0)) throw ValidationError("norm threshold must be >= 1");
  long double t = static_cast<long double>(norm.T);
  if (norm.kind == NormSpec::Kind::MaxEntry) {
    return static_cast<std::int64_t>(std::floor(t + 1e-9L));
  }
  return static_cast<std::int64_t>(std::floor(t + 1e-9L));
}

bool within_norm(const Mat& x, const NormSpec& norm) {
  if (norm.kind == NormSpec::Kind::MaxEntry) {
    return max_entry_norm(x) <= norm_box_bound(norm);
  }
  long double t = static_cast<long double>(norm.T);
  auto cap = static_cast<std::int64_t>(std::floor(t * t + 1e-6L));
  return frobenius_sq(x) <= cap;
}

Mat mat_mod(const Mat& x, std::int64_t d) {
  if (d < 1) throw ValidationError("mat_mod: modulus must be positive");
  Mat r = x;
  for (int i = 0; i < r.rows(); ++i) {
    for (int j = 0; j < r.cols(); ++j) {
      r(i, j) = ((r(i, j) % d) + d) % d;
    }
  }
  return r;
}

bool mats_equal(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return false;
    }
  }
  return true;
}

bool mat_lex_less(const Mat& a, const Mat& b) {
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
    }
  }
  return false;
}

void validate_dimension(int n) {
  if (n < 2 || n > 4) throw ValidationError("matrix dimension must be between 2 and 4");
}

}  // namespace detsieve
