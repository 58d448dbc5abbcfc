#pragma once

#include "tge/matrix.hpp"

namespace tge {

struct QrFactors {
  DenseMatrix q;  // orthogonal
  DenseMatrix r;  // upper triangular, non-negative diagonal
};

// Householder QR of a square matrix. The diagonal of R is made
// non-negative by flipping signs into Q, which pins a unique factorization
// for full-rank inputs.
QrFactors qr_decompose(const DenseMatrix& c);

}  // namespace tge
