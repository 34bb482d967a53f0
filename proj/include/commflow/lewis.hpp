#pragma once

#include <Eigen/Dense>

#include "commflow/sparse.hpp"

namespace commflow {

// Regularized lp-Lewis weights: fixed point of w = sigma(W^(1/2-1/p) A) + v.
struct LewisWeightVector {
  Eigen::VectorXd w;
  double p = 0.0;
  Eigen::VectorXd v;
  bool converged = false;
  double residual = 0.0;
};

// Fixed-point iteration from w0 = (n/m) 1 + v. Stops when the relative
// infinity-norm residual drops below tol or after max_iter rounds; the
// converged flag and the independently recomputed final residual are
// reported either way. Optional warm start overrides w0.
LewisWeightVector lewis_weights(const SparseMatrix& a, double p,
                                const Eigen::VectorXd& v, double tol = 1e-6,
                                int max_iter = 200,
                                const Eigen::VectorXd* warm_start = nullptr);

// Exponent p = 1 - 1/(4 log(4m/n)) used for the central-path weights.
double central_path_p(int m, int n);

}  // namespace commflow
