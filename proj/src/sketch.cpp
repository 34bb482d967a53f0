#include "commflow/sketch.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "commflow/leverage.hpp"

namespace commflow {

Eigen::VectorXd sample_matrix(const Eigen::VectorXd& u, double alpha, double c,
                              int dim, Rng& rng) {
  if (alpha <= 0.0 || c <= 0.0)
    throw std::invalid_argument("alpha and c must be positive");
  if ((u.array() < 0.0).any())
    throw std::invalid_argument("sampling weights must be nonnegative");
  const double log_dim = std::log(std::max(dim, 2));
  Eigen::VectorXd s = Eigen::VectorXd::Zero(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double p = std::min(1.0, alpha * c * log_dim * u[i]);
    const double draw = rng.uniform();
    if (p > 0.0 && draw < p) s[i] = 1.0 / std::sqrt(p);
  }
  return s;
}

bool loewner_sandwich_holds(const Eigen::MatrixXd& gram_a,
                            const Eigen::MatrixXd& gram_sketch, double lambda,
                            double slack) {
  // Whiten by gram_a^{-1/2} and check eigenvalues lie in [1/lambda, 1].
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_a);
  if (es.eigenvalues().minCoeff() <= 0.0) return false;
  const Eigen::MatrixXd isqrt =
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      es.eigenvectors().transpose();
  const Eigen::MatrixXd m = isqrt * gram_sketch * isqrt;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(m);
  const double lo = em.eigenvalues().minCoeff();
  const double hi = em.eigenvalues().maxCoeff();
  const double tol = slack + 64.0 * std::numeric_limits<double>::epsilon();
  return lo >= 1.0 / lambda - tol && hi <= 1.0 + tol;
}

SpectralSketch spectral_approx(const SparseMatrix& a,
                               const RowPartition& partition, double lambda,
                               const SketchOptions& opts, Rng& rng,
                               Channel* channel, ChargeMode charge,
                               std::optional<double> kappa_hat,
                               const std::string& phase) {
  if (lambda <= 1.0) throw std::invalid_argument("lambda must exceed 1");
  if (partition.size() != a.rows())
    throw std::invalid_argument("partition size does not match rows");
  const int n = a.cols();
  const int m = a.rows();
  const double alpha = std::pow((lambda + 1.0) / (lambda - 1.0), 2.0);
  const double scale = std::sqrt((lambda + 1.0) / (2.0 * lambda));

  // Leverage overestimates; the estimation subprotocol is out of scope and is
  // always charged by formula.
  const Eigen::VectorXd sigma = leverage_scores(a);
  const Eigen::VectorXd sigma_hat = leverage_overestimates(sigma, m);

  Eigen::MatrixXd gram_a;
  const bool verify = n <= opts.verify_dim;
  double kh = kappa_hat.value_or(0.0);
  if (verify || !kappa_hat.has_value()) {
    gram_a = a.gram();
    if (!kappa_hat.has_value()) kh = gram_condition_number(gram_a);
  }
  if (channel && charge == ChargeMode::kFormula) {
    channel->charge_protocol_cost(
        phase + ".levscore",
        lewis_protocol_bits(n, a.max_row_nnz(), channel->frac_bits(), kh));
  }

  const double row_bound = 2.0 * opts.confidence_c * alpha *
                               sigma_hat.lpNorm<1>() *
                               std::log(std::max(n, 2)) +
                           16.0;

  for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
    const Eigen::VectorXd s =
        sample_matrix(sigma_hat, alpha, opts.confidence_c, n, rng);
    std::vector<int> sampled;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s[i] != 0.0) sampled.push_back(static_cast<int>(i));
    if (static_cast<double>(sampled.size()) > row_bound) continue;
    if (verify && static_cast<int>(sampled.size()) < n) continue;

    SpectralSketch sk;
    sk.approx_factor = lambda;
    sk.scale = scale;
    sk.sampled_rows = sampled;
    Eigen::VectorXd row_scale(static_cast<Eigen::Index>(sampled.size()));
    for (size_t r = 0; r < sampled.size(); ++r)
      row_scale[static_cast<Eigen::Index>(r)] = scale * s[sampled[r]];

    if (channel && charge == ChargeMode::kActual) {
      // Each party ships its sampled rows, values quantized on the wire.
      std::vector<int> rows_of[2];
      std::vector<double> scale_of[2];
      for (size_t r = 0; r < sampled.size(); ++r) {
        const int who = partition.owner[sampled[r]] == PartyId::kAlice ? 0 : 1;
        rows_of[who].push_back(sampled[r]);
        scale_of[who].push_back(row_scale[static_cast<Eigen::Index>(r)]);
      }
      SparseMatrix part[2];
      for (int who = 0; who < 2; ++who) {
        Eigen::VectorXd sc = Eigen::Map<const Eigen::VectorXd>(
            scale_of[who].data(),
            static_cast<Eigen::Index>(scale_of[who].size()));
        part[who] = channel->send_sparse_rows(
            who == 0 ? PartyId::kAlice : PartyId::kBob, PartyId::kCoordinator,
            phase + ".rows", a, rows_of[who],
            rows_of[who].empty() ? nullptr : &sc);
      }
      std::vector<Triplet> ts;
      size_t cursor[2] = {0, 0};
      for (size_t r = 0; r < sampled.size(); ++r) {
        const int who = partition.owner[sampled[r]] == PartyId::kAlice ? 0 : 1;
        const int local = static_cast<int>(cursor[who]++);
        auto cols = part[who].row_cols(local);
        auto vals = part[who].row_vals(local);
        for (size_t p = 0; p < cols.size(); ++p)
          ts.push_back({static_cast<int>(r), cols[p], vals[p]});
      }
      sk.sketch = SparseMatrix::from_triplets(static_cast<int>(sampled.size()),
                                              n, std::move(ts));
    } else {
      if (channel && charge == ChargeMode::kFormula) {
        channel->charge_protocol_cost(
            phase + ".rows",
            sketch_protocol_bits(n, a.max_row_nnz(), channel->frac_bits(),
                                 kh));
      }
      sk.sketch = a.select_rows(sampled, &row_scale);
    }

    if (verify && !loewner_sandwich_holds(gram_a, sk.sketch.gram(), lambda,
                                          opts.verify_slack))
      continue;
    return sk;
  }
  throw SketchRetryError("spectral approximation failed after " +
                         std::to_string(opts.max_retries) + " retries");
}

SpectralSketch spectral_approx_local(const SparseMatrix& a, double lambda,
                                     const SketchOptions& opts, Rng& rng) {
  return spectral_approx(a, RowPartition::all(PartyId::kAlice, a.rows()),
                         lambda, opts, rng, nullptr, ChargeMode::kFormula,
                         std::nullopt, "sketch");
}

double sketch_solve_error_bound(double lambda_ratio) {
  const double l = std::log(lambda_ratio);
  const double e = std::exp(l);
  return std::pow(e * (e - 1.0), 2.0);
}

Eigen::VectorXd sketch_solve(const SparseMatrix& a,
                             const Eigen::VectorXd& d_diag,
                             const Eigen::VectorXd& b, double lambda, Rng& rng,
                             const SketchOptions& opts) {
  const SparseMatrix weighted = a.row_scaled(d_diag.cwiseSqrt());
  SpectralSketch sk = spectral_approx_local(weighted, lambda, opts, rng);
  const Eigen::MatrixXd h = sk.sketch.gram();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
    throw SingularMatrixError("sketch Gram matrix singular", 0.0);
  return ldlt.solve(b);
}

}  // namespace commflow
