#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "rational.hpp"

namespace detsieve {

// dense integer matrix; every exact routine below treats entries as exact integers
using Mat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct NormSpec {
  enum class Kind { MaxEntry, Frobenius };
  Kind kind = Kind::MaxEntry;
  double T = 1.0;
};

NormSpec::Kind norm_kind_from_string(const std::string& s);
std::string norm_kind_to_string(NormSpec::Kind k);

// exact determinant by cofactor expansion in 128 bits; dimensions up to 4
i128 det_exact(const Mat& x);

std::int64_t max_entry_norm(const Mat& x);
std::int64_t frobenius_sq(const Mat& x);

// largest integer B such that |x_ij| <= B is allowed by the norm threshold
std::int64_t norm_box_bound(const NormSpec& norm);
bool within_norm(const Mat& x, const NormSpec& norm);

Mat mat_mod(const Mat& x, std::int64_t d);
bool mats_equal(const Mat& a, const Mat& b);
bool mat_lex_less(const Mat& a, const Mat& b);

void validate_dimension(int n);

}  // namespace detsieve
