#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tge/adam.hpp"
#include "tge/cells.hpp"
#include "tge/split.hpp"
#include "tge/static_embed.hpp"
#include "tge/temporal_graph.hpp"

namespace tge {

enum class CellKind { gru, simple };

CellKind parse_cell_kind(const std::string& name);
std::string to_string(CellKind kind);

struct LinkExample {
  NodeId src = 0;
  NodeId dst = 0;
  double label = 0.0;  // 1 = edge, 0 = non-edge
};

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 512;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  CellKind cell = CellKind::gru;
  std::size_t hidden_dim = 0;  // 0: match the embedding width
};

// Logistic read-out over the concatenated endpoint states.
struct LinkHead {
  std::vector<double> weights;  // 2 * hidden
  double bias = 0.0;

  static LinkHead init(std::size_t hidden_dim, std::uint64_t seed);
};

struct ModelState {
  CellKind cell = CellKind::gru;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  GruParams gru;            // populated when cell == gru
  SimpleCellParams simple;  // populated when cell == simple
  LinkHead head;

  static ModelState init(CellKind cell, std::size_t input_dim,
                         std::size_t hidden_dim, std::uint64_t seed);

  // Cell tensors followed by head weights and bias, in a fixed order.
  std::vector<std::span<double>> parameter_tensors();
  std::vector<std::size_t> tensor_sizes() const;

  // Invalidate forward caches after an external parameter edit.
  void touch();
};

// Binary cross-entropy with the probability clamped to
// [1e-12, 1 - 1e-12] before the logs.
double bce_loss(double label, double probability);

double link_probability(const LinkHead& head, std::span<const double> h_src,
                        std::span<const double> h_dst);

// One row per snapshot: the trajectory a node's vector traces over time.
DenseMatrix node_sequence(const EmbeddingSeries& series, NodeId node);

struct BatchGradients {
  double loss = 0.0;  // mean over the batch
  std::vector<std::vector<double>> tensors;  // matches parameter_tensors()
};

// Mean loss and exact gradients for a batch of labelled pairs.
BatchGradients batch_gradients(const ModelState& model,
                               const EmbeddingSeries& inputs,
                               std::span<const LinkExample> batch);

double batch_loss(const ModelState& model, const EmbeddingSeries& inputs,
                  std::span<const LinkExample> batch);

struct TrainResult {
  std::vector<double> loss_history;  // mean train loss per epoch
};

// Mini-batch training with a fresh shuffle each epoch. `config.epochs == 0`
// leaves the model untouched and returns an empty history.
TrainResult fit(ModelState& model, AdamState& optimizer,
                const EmbeddingSeries& inputs,
                std::span<const LinkExample> examples,
                const TrainConfig& config);

std::vector<LinkExample> make_examples(const std::vector<NodePair>& positives,
                                       const std::vector<NodePair>& negatives);

// Edge probabilities for a list of pairs, reusing one forward pass per
// distinct endpoint.
std::vector<double> score_pairs(const ModelState& model,
                                const EmbeddingSeries& inputs,
                                std::span<const NodePair> pairs);

struct Checkpoint {
  ModelState model;
  TrainConfig config;
  AdamState adam;
  std::vector<double> loss_history;
};

std::string checkpoint_to_json(const ModelState& model,
                               const TrainConfig& config,
                               const AdamState& adam,
                               const std::vector<double>& loss_history);
Checkpoint checkpoint_from_json(const std::string& text);

}  // namespace tge
