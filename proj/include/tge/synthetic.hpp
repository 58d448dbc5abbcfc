#pragma once

#include <cstdint>

#include "tge/temporal_graph.hpp"

namespace tge {

// Planted-partition temporal graph: nodes fall into `communities` equal
// contiguous blocks; per snapshot every unordered pair is included with
// probability p_in (same block) or p_out (different blocks), timestamped
// with the snapshot index. Pairs may recur across snapshots.
struct SyntheticConfig {
  std::size_t num_nodes = 100;
  std::size_t num_snapshots = 10;
  std::size_t communities = 2;
  double p_in = 0.2;
  double p_out = 0.02;
  std::uint64_t seed = 0;
};

std::size_t community_of(std::size_t node, std::size_t num_nodes,
                         std::size_t communities);

TemporalGraph generate_synthetic(const SyntheticConfig& cfg);

}  // namespace tge
