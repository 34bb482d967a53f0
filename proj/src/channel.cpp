#include "commflow/channel.hpp"

#include <cmath>

namespace commflow {

FixedPointVector Channel::send(PartyId from, PartyId to,
                               const std::string& phase,
                               const Eigen::VectorXd& payload) {
  if (from == to) throw std::invalid_argument("send requires from != to");
  FixedPointVector q = quantize(payload, frac_bits_);
  const std::int64_t elements = payload.size();
  const std::int64_t per_scalar = 2 * frac_bits_ + 1;
  const std::int64_t bits = folded(from, to) ? 0 : elements * per_scalar;
  transcript_.add({phase, from, to, elements, bits});
  if (record_payloads_) recorded_.push_back(q.values);
  return q;
}

SparseMatrix Channel::send_sparse_rows(PartyId from, PartyId to,
                                       const std::string& phase,
                                       const SparseMatrix& a,
                                       const std::vector<int>& rows,
                                       const Eigen::VectorXd* row_scale) {
  if (from == to) throw std::invalid_argument("send requires from != to");
  const std::int64_t index_bits = ceil_log2(a.cols());
  const std::int64_t per_value = 2 * frac_bits_ + 1;
  std::int64_t elements = 0;
  for (int r : rows) elements += a.row_nnz(r);
  const std::int64_t bits =
      folded(from, to) ? 0 : elements * (index_bits + per_value);
  transcript_.add({phase, from, to, elements, bits});

  SparseMatrix sel = a.select_rows(rows, row_scale);
  // Values are delivered quantized.
  std::vector<Triplet> ts;
  for (int i = 0; i < sel.rows(); ++i) {
    auto cols = sel.row_cols(i);
    auto vals = sel.row_vals(i);
    Eigen::VectorXd v(static_cast<Eigen::Index>(vals.size()));
    for (size_t p = 0; p < vals.size(); ++p) v[static_cast<Eigen::Index>(p)] = vals[p];
    FixedPointVector q = quantize(v, frac_bits_);
    for (size_t p = 0; p < cols.size(); ++p)
      ts.push_back({i, cols[p], q.values[static_cast<Eigen::Index>(p)]});
  }
  return SparseMatrix::from_triplets(sel.rows(), sel.cols(), std::move(ts));
}

void Channel::charge_protocol_cost(const std::string& phase,
                                   std::int64_t bits) {
  transcript_.add(
      {phase, PartyId::kAlice, PartyId::kCoordinator, 0, bits});
}

Rng Channel::tag_stream(const std::string& tag) {
  return Rng::tagged_stream(seed_, tag, tag_counters_[tag]++);
}

Rng Channel::shared_rng(const std::string& tag) { return tag_stream(tag); }

Eigen::VectorXd Channel::shared_uniform(const std::string& tag, int count) {
  Rng rng = tag_stream(tag);
  Eigen::VectorXd v(count);
  for (int i = 0; i < count; ++i) v[i] = rng.uniform();
  return v;
}

std::vector<std::int64_t> Channel::shared_uniform_int(const std::string& tag,
                                                      int count,
                                                      std::int64_t lo,
                                                      std::int64_t hi) {
  Rng rng = tag_stream(tag);
  std::vector<std::int64_t> v(static_cast<size_t>(count));
  for (auto& x : v) x = rng.uniform_int(lo, hi);
  return v;
}

std::int64_t lewis_protocol_bits(int n, int k, int L, double kappa_hat) {
  if (n <= 0) return 0;
  const std::int64_t log_kappa =
      ceil_log2(static_cast<std::int64_t>(std::ceil(std::max(kappa_hat, 1.0))));
  return static_cast<std::int64_t>(n) * k * L +
         static_cast<std::int64_t>(n) * L * log_kappa;
}

std::int64_t sketch_protocol_bits(int n, int k, int L, double kappa_hat) {
  if (n <= 0) return 0;
  const std::int64_t log_kappa =
      ceil_log2(static_cast<std::int64_t>(std::ceil(std::max(kappa_hat, 1.0))));
  return static_cast<std::int64_t>(n) * k * L +
         static_cast<std::int64_t>(n) * (L + log_kappa);
}

}  // namespace commflow
