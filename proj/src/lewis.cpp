#include "commflow/lewis.hpp"

#include <cmath>

#include "commflow/leverage.hpp"

namespace commflow {

double central_path_p(int m, int n) {
  return 1.0 - 1.0 / (4.0 * std::log(4.0 * double(m) / double(n)));
}

namespace {

Eigen::VectorXd lewis_map(const SparseMatrix& a, double q,
                          const Eigen::VectorXd& w, const Eigen::VectorXd& v) {
  const Eigen::VectorXd weights = w.array().pow(q);
  return leverage_scores_weighted(a, weights) + v;
}

}  // namespace

LewisWeightVector lewis_weights(const SparseMatrix& a, double p,
                                const Eigen::VectorXd& v, double tol,
                                int max_iter,
                                const Eigen::VectorXd* warm_start) {
  if (p <= 0.0 || p >= 4.0) throw std::invalid_argument("p must be in (0, 4)");
  if ((v.array() <= 0.0).any())
    throw std::invalid_argument("regularizer v must be positive");
  const int m = a.rows();
  const int n = a.cols();
  const double q = 0.5 - 1.0 / p;

  LewisWeightVector out;
  out.p = p;
  out.v = v;
  Eigen::VectorXd w =
      warm_start ? *warm_start
                 : (Eigen::VectorXd::Constant(m, double(n) / double(m)) + v);

  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd w_next = lewis_map(a, q, w, v);
    const double diff = (w_next - w).cwiseAbs().maxCoeff();
    const double scale = w_next.cwiseAbs().maxCoeff();
    w = w_next;
    if (diff <= 0.5 * tol * scale) break;
  }
  // Residual recomputed from scratch so the reported value is independent of
  // the stopping rule.
  const Eigen::VectorXd image = lewis_map(a, q, w, v);
  out.residual = (w - image).cwiseAbs().maxCoeff() / w.cwiseAbs().maxCoeff();
  out.converged = out.residual <= tol;
  out.w = w;
  return out;
}

}  // namespace commflow
