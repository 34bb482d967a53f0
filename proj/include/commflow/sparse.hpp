#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "commflow/types.hpp"

namespace commflow {

struct Triplet {
  int row;
  int col;
  double value;
};

// Row-major sparse matrix (CSR). Rows are the unit of ownership and of
// transmission, so the per-row layout is the primary access path.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Validates indices, rejects duplicate (row, col) pairs, sorts within rows.
  static SparseMatrix from_triplets(int rows, int cols,
                                    std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(col_.size()); }

  // Per-row nonzero cap k, used for bit accounting.
  int max_row_nnz() const;
  int row_nnz(int i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  std::span<const int> row_cols(int i) const {
    return {col_.data() + row_ptr_[i],
            static_cast<size_t>(row_nnz(i))};
  }
  std::span<const double> row_vals(int i) const {
    return {val_.data() + row_ptr_[i],
            static_cast<size_t>(row_nnz(i))};
  }

  double row_dot(int i, const Eigen::VectorXd& x) const;
  void add_scaled_row(int i, double w, Eigen::VectorXd& acc) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;            // A x
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& y) const;  // A^T y

  // A^T diag(d) A as a dense n x n matrix.
  Eigen::MatrixXd gram_weighted(const Eigen::VectorXd& d) const;
  Eigen::MatrixXd gram() const;

  Eigen::MatrixXd dense() const;

  // diag(s) A
  SparseMatrix row_scaled(const Eigen::VectorXd& s) const;

  // Keeps the listed rows (in order); optional per-selected-row scaling.
  SparseMatrix select_rows(const std::vector<int>& idx,
                           const Eigen::VectorXd* scale = nullptr) const;

  double max_abs() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_;
  std::vector<double> val_;
};

}  // namespace commflow
