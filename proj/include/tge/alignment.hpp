#pragma once

#include <vector>

#include "tge/givens.hpp"
#include "tge/matrix.hpp"
#include "tge/static_embed.hpp"

namespace tge {

// Per-feature rotation cosines between two embedding snapshots.
// Elementwise cos_alpha^2 + cos_beta^2 = 1.
struct AngleMatrices {
  DenseMatrix cos_alpha;
  DenseMatrix cos_beta;
};

// Whether the later snapshot is rotated by Q or by Q^T, and whether each
// step references the already-aligned predecessor or the raw one.
struct AlignmentOptions {
  bool transpose_basis = false;
  bool reference_raw = false;
  double zero_tol = kDefaultZeroTol;
};

struct AlignmentResult {
  EmbeddingSeries aligned;
  std::vector<DenseMatrix> bases;  // one orthogonal d x d matrix per step
};

// Entry (v, i) holds givens_angles(earlier(v,i), later(v,i)).
AngleMatrices angle_matrices(const DenseMatrix& earlier,
                             const DenseMatrix& later,
                             double zero_tol = kDefaultZeroTol);

// C = cos_beta^T * cos_alpha, a d x d summary of how features co-rotate.
DenseMatrix correlation_matrix(const AngleMatrices& angles);

// Orthogonal factor of the QR decomposition of the correlation matrix.
DenseMatrix stable_basis(const DenseMatrix& correlation);

// Recursive projection: the first snapshot is kept, and each later raw
// snapshot is rotated into the frame of its aligned predecessor.
AlignmentResult align_series(const EmbeddingSeries& series,
                             const AlignmentOptions& options = {});

}  // namespace tge
