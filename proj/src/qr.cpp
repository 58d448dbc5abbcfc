#include "tge/qr.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tge/errors.hpp"

namespace tge {

QrFactors qr_decompose(const DenseMatrix& c) {
  const std::size_t n = c.rows();
  if (c.cols() != n) {
    throw_data("qr_decompose expects a square matrix, got " +
               std::to_string(n) + "x" + std::to_string(c.cols()));
  }
  if (!c.all_finite()) throw_numeric("qr_decompose: non-finite input");

  DenseMatrix r = c;
  DenseMatrix q = DenseMatrix::identity(n);
  std::vector<double> v(n);

  for (std::size_t k = 0; k + 1 < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm = std::hypot(norm, r(i, k));
    if (norm == 0.0) continue;  // column already zero below the pivot

    const double alpha = r(k, k) >= 0.0 ? -norm : norm;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) {
      v[i] = r(i, k);
      if (i == k) v[i] -= alpha;
      vnorm2 += v[i] * v[i];
    }
    if (vnorm2 == 0.0) continue;  // column already +norm * e_k

    const double scale = 2.0 / vnorm2;
    // R <- H R with H = I - scale * v v^T, applied to rows k..n-1.
    for (std::size_t j = k; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += v[i] * r(i, j);
      dot *= scale;
      for (std::size_t i = k; i < n; ++i) r(i, j) -= dot * v[i];
    }
    // Q <- Q H accumulates the product of reflections.
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = k; j < n; ++j) dot += q(i, j) * v[j];
      dot *= scale;
      for (std::size_t j = k; j < n; ++j) q(i, j) -= dot * v[j];
    }
    r(k, k) = alpha;
    for (std::size_t i = k + 1; i < n; ++i) r(i, k) = 0.0;
  }

  // Zero out roundoff below the diagonal, then fix diagonal signs.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) r(i, j) = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) {
      for (std::size_t j = i; j < n; ++j) r(i, j) = -r(i, j);
      for (std::size_t row = 0; row < n; ++row) q(row, i) = -q(row, i);
    }
  }
  return {std::move(q), std::move(r)};
}

}  // namespace tge
