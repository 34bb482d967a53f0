#include "commflow/leverage.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace commflow {

namespace {

// Inverse of the Gram matrix via LDLT, with a cheap rcond screen and an
// eigensolve fallback before declaring singularity.
Eigen::MatrixXd gram_inverse(const Eigen::MatrixXd& g) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  bool suspicious = ldlt.info() != Eigen::Success;
  double dmin = 0.0, dmax = 0.0;
  if (!suspicious) {
    Eigen::VectorXd d = ldlt.vectorD();
    dmin = d.minCoeff();
    dmax = d.maxCoeff();
    suspicious = !(dmin > 0.0) || dmin < dmax * 1e-13;
  }
  if (suspicious) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    const double lmax = es.eigenvalues().maxCoeff();
    const double lmin = es.eigenvalues().minCoeff();
    const double rcond = lmax > 0.0 ? lmin / lmax : 0.0;
    if (!(rcond > kRcondThreshold))
      throw SingularMatrixError("normal equations numerically singular", rcond);
  }
  return ldlt.solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
}

}  // namespace

Eigen::VectorXd leverage_scores_weighted(const SparseMatrix& a,
                                         const Eigen::VectorXd& row_weights) {
  const Eigen::VectorXd d = row_weights.array().square();
  const Eigen::MatrixXd minv = gram_inverse(a.gram_weighted(d));
  Eigen::VectorXd sigma(a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_vals(i);
    double s = 0.0;
    for (size_t p = 0; p < cols.size(); ++p)
      for (size_t q = 0; q < cols.size(); ++q)
        s += vals[p] * vals[q] * minv(cols[p], cols[q]);
    sigma[i] = d[i] * s;
  }
  return sigma;
}

Eigen::VectorXd leverage_scores(const SparseMatrix& a) {
  return leverage_scores_weighted(a, Eigen::VectorXd::Ones(a.rows()));
}

Eigen::VectorXd leverage_overestimates(const Eigen::VectorXd& sigma, int m) {
  const double floor_val = 1.0 / (2.0 * double(m) * double(m));
  Eigen::VectorXd hat(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    double v = std::max(sigma[i], floor_val);
    int exp;
    const double frac = std::frexp(v, &exp);  // v = frac * 2^exp, frac in [0.5,1)
    hat[i] = (frac == 0.5) ? v : std::ldexp(1.0, exp);
  }
  return hat;
}

Eigen::VectorXd solve_normal_equations(const SparseMatrix& a,
                                       const Eigen::VectorXd& d_diag,
                                       const Eigen::VectorXd& b) {
  const Eigen::MatrixXd minv = gram_inverse(a.gram_weighted(d_diag));
  return minv * b;
}

double gram_condition_number(const Eigen::MatrixXd& gram, double zero_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd ev = es.eigenvalues();
  const double lmax = ev.maxCoeff();
  double lmin = -1.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > zero_tol * std::max(lmax, 1.0)) {
      lmin = ev[i];
      break;
    }
  }
  if (lmin <= 0.0 || lmax <= 0.0) return std::numeric_limits<double>::infinity();
  return std::sqrt(lmax / lmin);
}

}  // namespace commflow
