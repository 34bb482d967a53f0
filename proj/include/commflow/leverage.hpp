#pragma once

#include <Eigen/Dense>

#include "commflow/sparse.hpp"
#include "commflow/types.hpp"

namespace commflow {

// Reciprocal-condition threshold below which normal-equation systems are
// treated as singular.
inline constexpr double kRcondThreshold = 1e-12;

// sigma_i = a_i^T (A^T A)^{-1} a_i. Requires full column rank; throws
// SingularMatrixError otherwise. 0 <= sigma_i <= 1 and sum sigma = n.
Eigen::VectorXd leverage_scores(const SparseMatrix& a);

// Leverage scores of diag(d)^(1/2)-weighted rows, i.e. of diag(w) A where
// w_i = sqrt(d_i). Used with precomputed Gram inverse paths internally.
Eigen::VectorXd leverage_scores_weighted(const SparseMatrix& a,
                                         const Eigen::VectorXd& row_weights);

// Smallest power of two >= max(sigma_i, 1/(2 m^2)). Overestimates sigma and
// has ||sigma_hat||_1 <= 9n.
Eigen::VectorXd leverage_overestimates(const Eigen::VectorXd& sigma, int m);

// Solves (A^T D A) x = b by dense Cholesky. Throws SingularMatrixError with a
// condition estimate when the Gram matrix is numerically singular.
Eigen::VectorXd solve_normal_equations(const SparseMatrix& a,
                                       const Eigen::VectorXd& d_diag,
                                       const Eigen::VectorXd& b);

// Exact condition number sqrt(lmax/lmin) of A^T A over nonzero eigenvalues.
double gram_condition_number(const Eigen::MatrixXd& gram,
                             double zero_tol = 1e-11);

}  // namespace commflow
