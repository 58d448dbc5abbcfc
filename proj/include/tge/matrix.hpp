#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tge {

// Dense row-major matrix of doubles. Value type, cheap to move.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  std::span<double> row(std::size_t i) {
    return std::span<double>(data_.data() + i * cols_, cols_);
  }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(data_.data() + i * cols_, cols_);
  }

  bool all_finite() const;

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Sparse matrix in coordinate form. Entries are unique per (row, col),
// sorted row-major, finite and non-zero.
class SparseMatrix {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  SparseMatrix() = default;

  // Sorts the triplets, drops exact zeros, rejects duplicate coordinates,
  // out-of-range indices and non-finite values.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Entry> triplets);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  DenseMatrix to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Entry> entries_;
};

// Exact dense product. Shapes must agree.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// Sparse-dense product; skips zero entries of `a`.
DenseMatrix matmul(const SparseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& m);

// y = m x and y = m^T x for vectors, used by the recurrent cells.
void matvec(const DenseMatrix& m, std::span<const double> x,
            std::span<double> y);
void matvec_transposed(const DenseMatrix& m, std::span<const double> x,
                       std::span<double> y);
std::vector<double> matvec(const DenseMatrix& m, std::span<const double> x);
std::vector<double> matvec_transposed(const DenseMatrix& m,
                                      std::span<const double> x);

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
double max_abs(const DenseMatrix& m);
double frobenius_norm(const DenseMatrix& m);

// Entries uniform in [-sqrt(6/(rows+cols)), +sqrt(6/(rows+cols))],
// deterministic per seed.
DenseMatrix glorot_init(std::size_t rows, std::size_t cols,
                        std::uint64_t seed);

}  // namespace tge
