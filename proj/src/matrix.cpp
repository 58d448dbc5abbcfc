#include "tge/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tge/errors.hpp"
#include "tge/rng.hpp"

namespace tge {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Entry> triplets) {
  std::erase_if(triplets, [](const Entry& e) { return e.value == 0.0; });
  for (const Entry& e : triplets) {
    if (e.row >= rows || e.col >= cols) {
      throw_data("sparse entry (" + std::to_string(e.row) + "," +
                 std::to_string(e.col) + ") out of range");
    }
    if (!std::isfinite(e.value)) {
      throw_numeric("non-finite sparse entry at (" + std::to_string(e.row) +
                    "," + std::to_string(e.col) + ")");
    }
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const Entry& a, const Entry& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
  for (std::size_t i = 1; i < triplets.size(); ++i) {
    if (triplets[i].row == triplets[i - 1].row &&
        triplets[i].col == triplets[i - 1].col) {
      throw_data("duplicate sparse entry at (" + std::to_string(triplets[i].row) +
                 "," + std::to_string(triplets[i].col) + ")");
    }
  }
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.entries_ = std::move(triplets);
  return m;
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix m(rows_, cols_);
  for (const Entry& e : entries_) m(e.row, e.col) = e.value;
  return m;
}

namespace {

void check_shapes(std::size_t a_cols, std::size_t b_rows) {
  if (a_cols != b_rows) {
    throw_data("matmul shape mismatch: " + std::to_string(a_cols) +
               " inner vs " + std::to_string(b_rows));
  }
}

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  check_shapes(a.cols(), b.rows());
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* out = c.row(i).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.row(k).data();
      for (std::size_t j = 0; j < n; ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

DenseMatrix matmul(const SparseMatrix& a, const DenseMatrix& b) {
  check_shapes(a.cols(), b.rows());
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (const SparseMatrix::Entry& e : a.entries()) {
    double* out = c.row(e.row).data();
    const double* brow = b.row(e.col).data();
    for (std::size_t j = 0; j < n; ++j) out[j] += e.value * brow[j];
  }
  return c;
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

void matvec(const DenseMatrix& m, std::span<const double> x,
            std::span<double> y) {
  check_shapes(m.cols(), x.size());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    const double* row = m.row(i).data();
    for (std::size_t j = 0; j < m.cols(); ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

void matvec_transposed(const DenseMatrix& m, std::span<const double> x,
                       std::span<double> y) {
  check_shapes(m.rows(), x.size());
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    const double* row = m.row(i).data();
    for (std::size_t j = 0; j < m.cols(); ++j) y[j] += row[j] * xi;
  }
}

std::vector<double> matvec(const DenseMatrix& m, std::span<const double> x) {
  std::vector<double> y(m.rows());
  matvec(m, x, y);
  return y;
}

std::vector<double> matvec_transposed(const DenseMatrix& m,
                                      std::span<const double> x) {
  std::vector<double> y(m.cols());
  matvec_transposed(m, x, y);
  return y;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double worst = 0.0;
  auto fa = a.flat();
  auto fb = b.flat();
  for (std::size_t i = 0; i < fa.size(); ++i)
    worst = std::max(worst, std::abs(fa[i] - fb[i]));
  return worst;
}

double max_abs(const DenseMatrix& m) {
  double worst = 0.0;
  for (double v : m.flat()) worst = std::max(worst, std::abs(v));
  return worst;
}

double frobenius_norm(const DenseMatrix& m) {
  double acc = 0.0;
  for (double v : m.flat()) acc += v * v;
  return std::sqrt(acc);
}

DenseMatrix glorot_init(std::size_t rows, std::size_t cols,
                        std::uint64_t seed) {
  if (rows == 0 || cols == 0) throw_data("glorot_init needs positive shape");
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  DenseMatrix m(rows, cols);
  Rng rng(seed);
  for (double& v : m.flat()) v = rng.next_symmetric(limit);
  return m;
}

}  // namespace tge
