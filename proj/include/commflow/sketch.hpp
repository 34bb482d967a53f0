#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "commflow/channel.hpp"
#include "commflow/rng.hpp"
#include "commflow/sparse.hpp"
#include "commflow/types.hpp"

namespace commflow {

// Row-sampled spectral approximation: (1/lambda) A^T A <= At^T At <= A^T A.
struct SpectralSketch {
  SparseMatrix sketch;            // At, scaling already applied
  double scale = 1.0;             // sqrt((lambda+1)/(2 lambda))
  std::vector<int> sampled_rows;  // original row indices
  double approx_factor = 1.0;     // lambda
};

// Def-3.3 sampling: p_i = min(1, alpha * c * log(dim) * u_i), S_ii = 1/sqrt(p_i)
// with probability p_i, else 0. dim is the column count of the matrix being
// sketched. A draw is consumed for every row so streams stay aligned.
Eigen::VectorXd sample_matrix(const Eigen::VectorXd& u, double alpha, double c,
                              int dim, Rng& rng);

enum class ChargeMode { kFormula, kActual };

struct SketchOptions {
  double confidence_c = 3.0;  // paper's failure bound 1 - n^(-c/3)
  int verify_dim = 30;        // dense Loewner eigencheck when cols <= this
  int max_retries = 8;
  double verify_slack = 1e-9;
};

// Algorithm-1 protocol: leverage overestimates, Bernoulli row sampling with
// alpha = ((lambda+1)/(lambda-1))^2, and At = sqrt((lambda+1)/(2 lambda)) S~ A.
// When channel is given, the leverage phase is charged by formula and the
// sampled rows are either charged by formula (kFormula) or sent row-by-row
// (kActual). kappa_hat feeds the accounting formula; if absent it is computed
// from the Gram matrix.
SpectralSketch spectral_approx(const SparseMatrix& a,
                               const RowPartition& partition, double lambda,
                               const SketchOptions& opts, Rng& rng,
                               Channel* channel = nullptr,
                               ChargeMode charge = ChargeMode::kFormula,
                               std::optional<double> kappa_hat = std::nullopt,
                               const std::string& phase = "sketch");

// Local (single-party) convenience overload.
SpectralSketch spectral_approx_local(const SparseMatrix& a, double lambda,
                                     const SketchOptions& opts, Rng& rng);

// Solves (A^T D A) x = b through the sketch of D^(1/2) A: x_bar = H^{-1} b
// with H = At^T At. The error satisfies
//   (x_bar - x)^T B (x_bar - x) <= (e^l (e^l - 1))^2 * x^T B x,
// for B = A^T D A and l = ln(lambda).
Eigen::VectorXd sketch_solve(const SparseMatrix& a,
                             const Eigen::VectorXd& d_diag,
                             const Eigen::VectorXd& b, double lambda, Rng& rng,
                             const SketchOptions& opts = {});

// The Lemma bound (e^l (e^l - 1))^2 for the quadratic-form error ratio.
double sketch_solve_error_bound(double lambda_ratio);

// Dense eigencheck of (1/lambda) A^T A <= At^T At <= A^T A.
bool loewner_sandwich_holds(const Eigen::MatrixXd& gram_a,
                            const Eigen::MatrixXd& gram_sketch, double lambda,
                            double slack = 1e-9);

}  // namespace commflow
