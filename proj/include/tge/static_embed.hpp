#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tge/influence.hpp"
#include "tge/matrix.hpp"
#include "tge/snapshots.hpp"

namespace tge {

// Per-snapshot node embeddings, one N x dim matrix per snapshot.
struct EmbeddingSeries {
  std::size_t dim = 0;
  std::vector<DenseMatrix> snapshots;

  std::size_t num_snapshots() const { return snapshots.size(); }
  std::size_t num_nodes() const {
    return snapshots.empty() ? 0 : snapshots.front().rows();
  }

  std::string to_json() const;
  static EmbeddingSeries from_json(const std::string& text);
};

struct StaticEmbedConfig {
  std::size_t dim = 128;
  std::size_t num_layers = 3;
  double tau = 1.0;
  bool scalar_decay = false;
};

// Derives one weight seed per layer from a base seed.
std::vector<std::uint64_t> layer_seeds(std::uint64_t base,
                                       std::size_t num_layers);

// Unparameterized linear graph convolution: starting from implicit
// one-hot features, repeat R <- A R W with an N x dim first weight and
// dim x dim later weights drawn once from the seeds. No activation, no
// degree normalization; the N x N identity start is never materialized.
DenseMatrix static_forward(const InfluenceMatrix& influence, std::size_t dim,
                           std::size_t num_layers,
                           std::span<const std::uint64_t> seeds);

// One static_forward per snapshot with weights shared across snapshots,
// so consecutive embeddings come from the same generating map.
EmbeddingSeries embed_series(const SnapshotSeries& series,
                             const StaticEmbedConfig& cfg,
                             std::uint64_t weight_seed);

}  // namespace tge
