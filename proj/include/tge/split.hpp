#pragma once

#include <cstdint>
#include <vector>

#include "tge/snapshots.hpp"
#include "tge/temporal_graph.hpp"

namespace tge {

using NodePair = std::pair<NodeId, NodeId>;

// Temporal train/test partition. Positives are distinct node pairs: a
// pair trains if it has any occurrence at or before the pivot, tests if
// its first occurrence is after the pivot. Negatives are pairs never
// connected at any time, matched 1:1 with the positives per partition.
struct DataSplit {
  double pivot_time = 0.0;
  std::vector<NodePair> train_positives;
  std::vector<NodePair> test_positives;
  std::vector<NodePair> train_negatives;
  std::vector<NodePair> test_negatives;
};

// Splits at the timestamp of the ceil(train_fraction * |E|)-th edge
// occurrence in time order; equal-timestamp edges all stay in training.
// The seed drives negative sampling. Errors when the test side is empty.
DataSplit temporal_split(const SnapshotSeries& series, double train_fraction,
                         std::uint64_t seed);

// `count` distinct pairs drawn uniformly from pairs that appear neither
// among g's edges nor in `exclusion`; no self-pairs; unordered pairs for
// undirected graphs. Deterministic per seed. Errors when infeasible.
std::vector<NodePair> sample_negatives(const TemporalGraph& g,
                                       std::size_t count, std::uint64_t seed,
                                       const std::vector<NodePair>& exclusion);

}  // namespace tge
