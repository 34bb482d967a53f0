#include "commflow/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace commflow {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols,
                                         std::vector<Triplet> entries) {
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].row == entries[i - 1].row &&
        entries[i].col == entries[i - 1].col)
      throw std::invalid_argument("duplicate (row, col) entry");
  }
  SparseMatrix a;
  a.rows_ = rows;
  a.cols_ = cols;
  a.row_ptr_.assign(static_cast<size_t>(rows) + 1, 0);
  a.col_.reserve(entries.size());
  a.val_.reserve(entries.size());
  for (const Triplet& t : entries) a.row_ptr_[static_cast<size_t>(t.row) + 1]++;
  for (int i = 0; i < rows; ++i) a.row_ptr_[i + 1] += a.row_ptr_[i];
  for (const Triplet& t : entries) {
    a.col_.push_back(t.col);
    a.val_.push_back(t.value);
  }
  return a;
}

int SparseMatrix::max_row_nnz() const {
  int k = 0;
  for (int i = 0; i < rows_; ++i) k = std::max(k, row_nnz(i));
  return k;
}

double SparseMatrix::row_dot(int i, const Eigen::VectorXd& x) const {
  double s = 0.0;
  for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += val_[p] * x[col_[p]];
  return s;
}

void SparseMatrix::add_scaled_row(int i, double w, Eigen::VectorXd& acc) const {
  for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
    acc[col_[p]] += w * val_[p];
}

Eigen::VectorXd SparseMatrix::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
  for (int i = 0; i < rows_; ++i) y[i] = row_dot(i, x);
  return y;
}

Eigen::VectorXd SparseMatrix::apply_transpose(const Eigen::VectorXd& y) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cols_);
  for (int i = 0; i < rows_; ++i) add_scaled_row(i, y[i], x);
  return x;
}

Eigen::MatrixXd SparseMatrix::gram_weighted(const Eigen::VectorXd& d) const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(cols_, cols_);
  for (int i = 0; i < rows_; ++i) {
    const double w = d[i];
    if (w == 0.0) continue;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const double wv = w * val_[p];
      for (int q = row_ptr_[i]; q < row_ptr_[i + 1]; ++q)
        g(col_[p], col_[q]) += wv * val_[q];
    }
  }
  return g;
}

Eigen::MatrixXd SparseMatrix::gram() const {
  return gram_weighted(Eigen::VectorXd::Ones(rows_));
}

Eigen::MatrixXd SparseMatrix::dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
      d(i, col_[p]) = val_[p];
  return d;
}

SparseMatrix SparseMatrix::row_scaled(const Eigen::VectorXd& s) const {
  SparseMatrix a = *this;
  for (int i = 0; i < rows_; ++i)
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) a.val_[p] *= s[i];
  return a;
}

SparseMatrix SparseMatrix::select_rows(const std::vector<int>& idx,
                                       const Eigen::VectorXd* scale) const {
  SparseMatrix a;
  a.rows_ = static_cast<int>(idx.size());
  a.cols_ = cols_;
  a.row_ptr_.assign(idx.size() + 1, 0);
  for (size_t r = 0; r < idx.size(); ++r) {
    const int i = idx[r];
    const double w = scale ? (*scale)[static_cast<Eigen::Index>(r)] : 1.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      a.col_.push_back(col_[p]);
      a.val_.push_back(w * val_[p]);
    }
    a.row_ptr_[r + 1] = static_cast<int>(a.col_.size());
  }
  return a;
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : val_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace commflow
