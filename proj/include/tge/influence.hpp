#pragma once

#include "tge/matrix.hpp"
#include "tge/snapshots.hpp"

namespace tge {

// Adjacency-with-self-loops whose off-diagonal entries decay
// exponentially with edge age, measured in snapshot indices:
//   weight(i,j) = exp((last_seen(i,j) - snapshot) / tau)   in (0, 1]
// The diagonal is exactly 1. Symmetric iff the source graph is undirected.
struct InfluenceMatrix {
  std::uint32_t snapshot_index = 0;
  double decay_tau = 1.0;
  SparseMatrix matrix;
};

// When `scalar_decay` is set the per-edge reading of the decay is replaced
// by the scalar one: every present edge keeps weight 1 and the matrix is
// plain adjacency plus identity.
InfluenceMatrix influence_matrix(const SnapshotSeries& series,
                                 std::uint32_t snapshot, double tau,
                                 bool scalar_decay = false);

}  // namespace tge
