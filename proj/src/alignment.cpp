#include "tge/alignment.hpp"

#include <string>
#include <utility>

#include "tge/errors.hpp"
#include "tge/qr.hpp"

namespace tge {

AngleMatrices angle_matrices(const DenseMatrix& earlier,
                             const DenseMatrix& later, double zero_tol) {
  if (earlier.rows() != later.rows() || earlier.cols() != later.cols()) {
    throw_data("angle_matrices: shape mismatch " +
               std::to_string(earlier.rows()) + "x" +
               std::to_string(earlier.cols()) + " vs " +
               std::to_string(later.rows()) + "x" +
               std::to_string(later.cols()));
  }
  AngleMatrices out{DenseMatrix(earlier.rows(), earlier.cols()),
                    DenseMatrix(earlier.rows(), earlier.cols())};
  for (std::size_t v = 0; v < earlier.rows(); ++v) {
    for (std::size_t i = 0; i < earlier.cols(); ++i) {
      const AnglePair pair =
          givens_angles(earlier(v, i), later(v, i), zero_tol);
      out.cos_alpha(v, i) = pair.cos_alpha;
      out.cos_beta(v, i) = pair.cos_beta;
    }
  }
  return out;
}

DenseMatrix correlation_matrix(const AngleMatrices& angles) {
  return matmul(transpose(angles.cos_beta), angles.cos_alpha);
}

DenseMatrix stable_basis(const DenseMatrix& correlation) {
  return qr_decompose(correlation).q;
}

AlignmentResult align_series(const EmbeddingSeries& series,
                             const AlignmentOptions& options) {
  const std::size_t t_count = series.num_snapshots();
  if (t_count < 2) {
    throw_data("align_series needs at least two snapshots, got " +
               std::to_string(t_count));
  }

  AlignmentResult result;
  result.aligned.dim = series.dim;
  result.aligned.snapshots.reserve(t_count);
  result.aligned.snapshots.push_back(series.snapshots.front());
  result.bases.reserve(t_count - 1);

  for (std::size_t t = 0; t + 1 < t_count; ++t) {
    const DenseMatrix& reference = options.reference_raw
                                       ? series.snapshots[t]
                                       : result.aligned.snapshots[t];
    const DenseMatrix& next_raw = series.snapshots[t + 1];
    const AngleMatrices angles =
        angle_matrices(reference, next_raw, options.zero_tol);
    DenseMatrix basis = stable_basis(correlation_matrix(angles));
    if (options.transpose_basis) basis = transpose(basis);
    result.aligned.snapshots.push_back(matmul(next_raw, basis));
    result.bases.push_back(std::move(basis));
  }
  return result;
}

}  // namespace tge
