#pragma once

#include <Eigen/Dense>

#include "commflow/lewis.hpp"
#include "commflow/sparse.hpp"
#include "commflow/types.hpp"

namespace commflow {

// Box-constrained LP min { c^T x : A^T x = b, l <= x <= u } with rows of A
// (and the matching entries of c, l, u) split between Alice and Bob. b is
// known to all parties. L bounds the bit width of the entries on the wire.
struct DistributedLP {
  SparseMatrix a;
  RowPartition partition;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  Eigen::VectorXd l;
  Eigen::VectorXd u;
  int bits = 16;

  int m() const { return a.rows(); }
  int n() const { return a.cols(); }
  void validate() const;
};

// IPM state: primal x, slack s, path parameter mu, and the central-path
// weights tau = w(phi''(x)^{-1/2}).
struct CenteredTriple {
  Eigen::VectorXd x;
  Eigen::VectorXd s;
  double mu = 0.0;
  LewisWeightVector tau;
};

// Step-size constants of the short-step method. conforming() evaluates the
// paper's formulas verbatim (C >= 100); practical() keeps the structural
// relation r = eps*gamma/(C_norm sqrt(n)) but picks eps, lambda, gamma that
// make desk-scale runs converge. Practical runs are flagged non-conforming.
struct StepConstants {
  double alpha = 0.0;
  double epsilon = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;
  double r = 0.0;
  double C = 0.0;
  double C_norm = 0.0;
  double C_valid = 0.0;
  double p = 0.0;
  bool conforming = false;

  static StepConstants conforming_constants(int m, int n, double C = 100.0);
  static StepConstants practical(int m, int n, double epsilon = 0.125,
                                 double band = 2.0, double stability = 0.9);
};

struct CenteringThresholds {
  double centrality;        // condition 1, infinity norm
  double dual_residual;     // condition 2, least-squares residual
  double primal_weighted;   // condition 3, (A^T (T Phi'')^{-1} A)^{-1} norm
};

struct CenteringReport {
  double centrality_norm = 0.0;
  double dual_residual = 0.0;
  double primal_residual_weighted = 0.0;
  bool cond1 = false, cond2 = false, cond3 = false;
  bool is_centered = false;
  CenteringThresholds thresholds{};
};

}  // namespace commflow
