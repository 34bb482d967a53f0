#pragma once

#include <Eigen/Dense>

#include "commflow/types.hpp"

namespace commflow {

// Vector of L-bit fixed-point numbers: every value is an integer multiple of
// 2^-L and lies in {0} or +/-[2^-L, 2^L - 2^-L].
struct FixedPointVector {
  Eigen::VectorXd values;
  int frac_bits = 0;
};

// Rounds each entry to the nearest multiple of 2^-L, ties to even grid index.
// Throws FixedPointOverflow if an entry does not round into the representable
// range (in particular whenever |x_i| >= 2^L).
FixedPointVector quantize(const Eigen::VectorXd& x, int frac_bits);

// Largest representable magnitude, 2^L - 2^-L.
double fixed_point_max(int frac_bits);

bool is_representable(const Eigen::VectorXd& x, int frac_bits);

}  // namespace commflow
