#include "tge/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "tge/errors.hpp"
#include "tge/rng.hpp"

namespace tge {
namespace {

constexpr double kProbClamp = 1e-12;
constexpr const char* kCheckpointFormat = "tge-checkpoint-v1";

// Distinct endpoints of a batch in ascending node order, plus a lookup
// from node id to slot.
struct NodeIndex {
  std::vector<NodeId> nodes;
  std::unordered_map<NodeId, std::size_t> slot;
};

NodeId first_of(const LinkExample& e) { return e.src; }
NodeId second_of(const LinkExample& e) { return e.dst; }
NodeId first_of(const NodePair& p) { return p.first; }
NodeId second_of(const NodePair& p) { return p.second; }

template <typename PairLike>
NodeIndex index_endpoints(std::span<const PairLike> items,
                          std::size_t num_nodes) {
  NodeIndex idx;
  for (const auto& it : items) {
    idx.nodes.push_back(first_of(it));
    idx.nodes.push_back(second_of(it));
  }
  std::sort(idx.nodes.begin(), idx.nodes.end());
  idx.nodes.erase(std::unique(idx.nodes.begin(), idx.nodes.end()),
                  idx.nodes.end());
  if (!idx.nodes.empty() && idx.nodes.back() >= num_nodes) {
    throw_data("pair references node " + std::to_string(idx.nodes.back()) +
               " but the embeddings cover only " + std::to_string(num_nodes) +
               " nodes");
  }
  idx.slot.reserve(idx.nodes.size());
  for (std::size_t i = 0; i < idx.nodes.size(); ++i) idx.slot[idx.nodes[i]] = i;
  return idx;
}

// Final hidden state per indexed node; caches kept for the backward pass.
struct ForwardPass {
  std::vector<GruCache> gru;
  std::vector<SimpleCellCache> simple;
  std::vector<std::vector<double>> finals;
};

ForwardPass run_forward(const ModelState& model, const EmbeddingSeries& inputs,
                        const NodeIndex& idx) {
  ForwardPass fwd;
  fwd.finals.reserve(idx.nodes.size());
  for (NodeId node : idx.nodes) {
    const DenseMatrix seq = node_sequence(inputs, node);
    if (model.cell == CellKind::gru) {
      fwd.gru.push_back(gru_forward(model.gru, seq));
      const auto h = fwd.gru.back().final_hidden();
      fwd.finals.emplace_back(h.begin(), h.end());
    } else {
      fwd.simple.push_back(simple_forward(model.simple, seq));
      const auto h = fwd.simple.back().final_hidden();
      fwd.finals.emplace_back(h.begin(), h.end());
    }
  }
  return fwd;
}

nlohmann::json matrix_to_json(const DenseMatrix& m) {
  const auto flat = m.flat();
  return nlohmann::json(std::vector<double>(flat.begin(), flat.end()));
}

DenseMatrix matrix_from_json(const nlohmann::json& j, std::size_t rows,
                             std::size_t cols) {
  const auto values = j.get<std::vector<double>>();
  if (values.size() != rows * cols) {
    throw_data("checkpoint tensor has " + std::to_string(values.size()) +
               " values, expected " + std::to_string(rows * cols));
  }
  DenseMatrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.flat().begin());
  return m;
}

}  // namespace

CellKind parse_cell_kind(const std::string& name) {
  if (name == "gru") return CellKind::gru;
  if (name == "simple") return CellKind::simple;
  throw_usage("unknown cell kind '" + name + "' (expected gru or simple)");
}

std::string to_string(CellKind kind) {
  return kind == CellKind::gru ? "gru" : "simple";
}

LinkHead LinkHead::init(std::size_t hidden_dim, std::uint64_t seed) {
  if (hidden_dim == 0) throw_data("link head needs a positive hidden size");
  LinkHead head;
  const DenseMatrix w = glorot_init(1, 2 * hidden_dim, seed);
  head.weights.assign(w.flat().begin(), w.flat().end());
  head.bias = 0.0;
  return head;
}

ModelState ModelState::init(CellKind cell, std::size_t input_dim,
                            std::size_t hidden_dim, std::uint64_t seed) {
  ModelState model;
  model.cell = cell;
  model.input_dim = input_dim;
  model.hidden_dim = hidden_dim;
  if (cell == CellKind::gru) {
    model.gru = GruParams::init(input_dim, hidden_dim, derive_seed(seed, 0));
  } else {
    model.simple =
        SimpleCellParams::init(input_dim, hidden_dim, derive_seed(seed, 0));
  }
  model.head = LinkHead::init(hidden_dim, derive_seed(seed, 1));
  return model;
}

std::vector<std::span<double>> ModelState::parameter_tensors() {
  std::vector<std::span<double>> spans =
      cell == CellKind::gru ? gru.tensors() : simple.tensors();
  spans.emplace_back(head.weights);
  spans.emplace_back(&head.bias, 1);
  return spans;
}

std::vector<std::size_t> ModelState::tensor_sizes() const {
  const std::vector<std::span<const double>> spans =
      cell == CellKind::gru ? gru.tensors() : simple.tensors();
  std::vector<std::size_t> sizes;
  sizes.reserve(spans.size() + 2);
  for (const auto& s : spans) sizes.push_back(s.size());
  sizes.push_back(head.weights.size());
  sizes.push_back(1);
  return sizes;
}

void ModelState::touch() {
  if (cell == CellKind::gru) {
    gru.touch();
  } else {
    simple.touch();
  }
}

double bce_loss(double label, double probability) {
  const double p =
      std::clamp(probability, kProbClamp, 1.0 - kProbClamp);
  return -(label * std::log(p) + (1.0 - label) * std::log(1.0 - p));
}

double link_probability(const LinkHead& head, std::span<const double> h_src,
                        std::span<const double> h_dst) {
  const std::size_t h = h_src.size();
  if (head.weights.size() != 2 * h || h_dst.size() != h) {
    throw_data("head width does not match the hidden states");
  }
  double logit = head.bias;
  for (std::size_t i = 0; i < h; ++i) {
    logit += head.weights[i] * h_src[i] + head.weights[h + i] * h_dst[i];
  }
  return sigmoid(logit);
}

DenseMatrix node_sequence(const EmbeddingSeries& series, NodeId node) {
  if (node >= series.num_nodes()) {
    throw_data("node " + std::to_string(node) + " is out of range");
  }
  DenseMatrix seq(series.num_snapshots(), series.dim);
  for (std::size_t t = 0; t < series.num_snapshots(); ++t) {
    const auto src = series.snapshots[t].row(node);
    std::copy(src.begin(), src.end(), seq.row(t).begin());
  }
  return seq;
}

BatchGradients batch_gradients(const ModelState& model,
                               const EmbeddingSeries& inputs,
                               std::span<const LinkExample> batch) {
  if (batch.empty()) throw_data("gradient batch is empty");
  const std::size_t h = model.hidden_dim;
  const NodeIndex idx = index_endpoints(batch, inputs.num_nodes());
  const ForwardPass fwd = run_forward(model, inputs, idx);

  std::vector<std::vector<double>> d_final(idx.nodes.size(),
                                           std::vector<double>(h, 0.0));
  std::vector<double> d_head_w(2 * h, 0.0);
  double d_head_b = 0.0;
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(batch.size());

  for (const LinkExample& ex : batch) {
    const std::size_t su = idx.slot.at(ex.src);
    const std::size_t sv = idx.slot.at(ex.dst);
    const std::vector<double>& hu = fwd.finals[su];
    const std::vector<double>& hv = fwd.finals[sv];
    const double p = link_probability(model.head, hu, hv);
    loss += bce_loss(ex.label, p);
    const double d_logit = (p - ex.label) * inv_n;
    for (std::size_t i = 0; i < h; ++i) {
      d_head_w[i] += d_logit * hu[i];
      d_head_w[h + i] += d_logit * hv[i];
      d_final[su][i] += d_logit * model.head.weights[i];
      d_final[sv][i] += d_logit * model.head.weights[h + i];
    }
    d_head_b += d_logit;
  }
  loss *= inv_n;

  BatchGradients out;
  out.loss = loss;
  if (model.cell == CellKind::gru) {
    GruGrads grads = GruGrads::zeros_like(model.gru);
    for (std::size_t i = 0; i < idx.nodes.size(); ++i) {
      gru_backward(model.gru, fwd.gru[i], d_final[i], grads);
    }
    for (const auto& t : grads.tensors()) {
      out.tensors.emplace_back(t.begin(), t.end());
    }
  } else {
    SimpleCellGrads grads = SimpleCellGrads::zeros_like(model.simple);
    for (std::size_t i = 0; i < idx.nodes.size(); ++i) {
      simple_backward(model.simple, fwd.simple[i], d_final[i], grads);
    }
    for (const auto& t : grads.tensors()) {
      out.tensors.emplace_back(t.begin(), t.end());
    }
  }
  out.tensors.push_back(std::move(d_head_w));
  out.tensors.push_back({d_head_b});
  return out;
}

double batch_loss(const ModelState& model, const EmbeddingSeries& inputs,
                  std::span<const LinkExample> batch) {
  if (batch.empty()) throw_data("loss batch is empty");
  const NodeIndex idx = index_endpoints(batch, inputs.num_nodes());
  const ForwardPass fwd = run_forward(model, inputs, idx);
  double loss = 0.0;
  for (const LinkExample& ex : batch) {
    const double p = link_probability(model.head, fwd.finals[idx.slot.at(ex.src)],
                                      fwd.finals[idx.slot.at(ex.dst)]);
    loss += bce_loss(ex.label, p);
  }
  return loss / static_cast<double>(batch.size());
}

TrainResult fit(ModelState& model, AdamState& optimizer,
                const EmbeddingSeries& inputs,
                std::span<const LinkExample> examples,
                const TrainConfig& config) {
  if (examples.empty()) throw_data("training needs at least one example");
  if (config.batch_size == 0) throw_data("batch size must be > 0");
  TrainResult result;
  if (config.epochs == 0) return result;

  Rng rng(derive_seed(config.seed, 2));
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<LinkExample> batch;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t stop =
          std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(examples[order[i]]);
      }
      BatchGradients grads = batch_gradients(model, inputs, batch);
      std::vector<std::span<const double>> grad_spans;
      grad_spans.reserve(grads.tensors.size());
      for (const auto& t : grads.tensors) grad_spans.emplace_back(t);
      adam_step(optimizer, model.parameter_tensors(), grad_spans);
      model.touch();
      epoch_loss += grads.loss * static_cast<double>(batch.size());
    }
    result.loss_history.push_back(epoch_loss /
                                  static_cast<double>(examples.size()));
  }
  return result;
}

std::vector<LinkExample> make_examples(const std::vector<NodePair>& positives,
                                       const std::vector<NodePair>& negatives) {
  std::vector<LinkExample> out;
  out.reserve(positives.size() + negatives.size());
  for (const NodePair& p : positives) out.push_back({p.first, p.second, 1.0});
  for (const NodePair& p : negatives) out.push_back({p.first, p.second, 0.0});
  return out;
}

std::vector<double> score_pairs(const ModelState& model,
                                const EmbeddingSeries& inputs,
                                std::span<const NodePair> pairs) {
  if (pairs.empty()) return {};
  const NodeIndex idx = index_endpoints(pairs, inputs.num_nodes());
  const ForwardPass fwd = run_forward(model, inputs, idx);
  std::vector<double> scores;
  scores.reserve(pairs.size());
  for (const NodePair& p : pairs) {
    scores.push_back(link_probability(model.head,
                                      fwd.finals[idx.slot.at(p.first)],
                                      fwd.finals[idx.slot.at(p.second)]));
  }
  return scores;
}

std::string checkpoint_to_json(const ModelState& model,
                               const TrainConfig& config,
                               const AdamState& adam,
                               const std::vector<double>& loss_history) {
  nlohmann::json j;
  j["format"] = kCheckpointFormat;
  j["adam"] = {{"step", adam.step},
               {"learning_rate", adam.config.learning_rate},
               {"beta1", adam.config.beta1},
               {"beta2", adam.config.beta2},
               {"epsilon", adam.config.epsilon},
               {"first_moment", adam.first_moment},
               {"second_moment", adam.second_moment}};
  j["cell"] = to_string(model.cell);
  j["input_dim"] = model.input_dim;
  j["hidden_dim"] = model.hidden_dim;
  j["config"] = {{"epochs", config.epochs},
                 {"batch_size", config.batch_size},
                 {"learning_rate", config.learning_rate},
                 {"seed", config.seed},
                 {"cell", to_string(config.cell)},
                 {"hidden_dim", config.hidden_dim}};
  j["loss_history"] = loss_history;
  j["head"] = {{"weights", model.head.weights}, {"bias", model.head.bias}};
  if (model.cell == CellKind::gru) {
    j["gru"] = {{"w_update", matrix_to_json(model.gru.w_update)},
                {"u_update", matrix_to_json(model.gru.u_update)},
                {"w_reset", matrix_to_json(model.gru.w_reset)},
                {"u_reset", matrix_to_json(model.gru.u_reset)},
                {"w_cand", matrix_to_json(model.gru.w_cand)},
                {"u_cand", matrix_to_json(model.gru.u_cand)},
                {"b_update", model.gru.b_update},
                {"b_reset", model.gru.b_reset},
                {"b_cand", model.gru.b_cand}};
  } else {
    j["simple"] = {{"recurrent", matrix_to_json(model.simple.recurrent)},
                   {"input", matrix_to_json(model.simple.input)}};
  }
  return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kCheckpointFormat) {
      throw_data("unrecognised checkpoint format '" +
                 j.at("format").get<std::string>() + "'");
    }
    Checkpoint cp;
    const CellKind cell = parse_cell_kind(j.at("cell").get<std::string>());
    const auto d = j.at("input_dim").get<std::size_t>();
    const auto h = j.at("hidden_dim").get<std::size_t>();

    const nlohmann::json& cfg = j.at("config");
    cp.config.epochs = cfg.at("epochs").get<std::size_t>();
    cp.config.batch_size = cfg.at("batch_size").get<std::size_t>();
    cp.config.learning_rate = cfg.at("learning_rate").get<double>();
    cp.config.seed = cfg.at("seed").get<std::uint64_t>();
    cp.config.cell = parse_cell_kind(cfg.at("cell").get<std::string>());
    cp.config.hidden_dim = cfg.at("hidden_dim").get<std::size_t>();
    cp.loss_history = j.at("loss_history").get<std::vector<double>>();

    const nlohmann::json& adam = j.at("adam");
    cp.adam.step = adam.at("step").get<std::uint64_t>();
    cp.adam.config.learning_rate = adam.at("learning_rate").get<double>();
    cp.adam.config.beta1 = adam.at("beta1").get<double>();
    cp.adam.config.beta2 = adam.at("beta2").get<double>();
    cp.adam.config.epsilon = adam.at("epsilon").get<double>();
    cp.adam.first_moment =
        adam.at("first_moment").get<std::vector<std::vector<double>>>();
    cp.adam.second_moment =
        adam.at("second_moment").get<std::vector<std::vector<double>>>();
    if (cp.adam.first_moment.size() != cp.adam.second_moment.size()) {
      throw_data("checkpoint moment lists disagree in length");
    }

    ModelState& m = cp.model;
    m.cell = cell;
    m.input_dim = d;
    m.hidden_dim = h;
    m.head.weights = j.at("head").at("weights").get<std::vector<double>>();
    m.head.bias = j.at("head").at("bias").get<double>();
    if (m.head.weights.size() != 2 * h) {
      throw_data("checkpoint head width does not match the hidden size");
    }
    if (cell == CellKind::gru) {
      const nlohmann::json& g = j.at("gru");
      m.gru.input_dim = d;
      m.gru.hidden_dim = h;
      m.gru.w_update = matrix_from_json(g.at("w_update"), h, d);
      m.gru.u_update = matrix_from_json(g.at("u_update"), h, h);
      m.gru.w_reset = matrix_from_json(g.at("w_reset"), h, d);
      m.gru.u_reset = matrix_from_json(g.at("u_reset"), h, h);
      m.gru.w_cand = matrix_from_json(g.at("w_cand"), h, d);
      m.gru.u_cand = matrix_from_json(g.at("u_cand"), h, h);
      m.gru.b_update = g.at("b_update").get<std::vector<double>>();
      m.gru.b_reset = g.at("b_reset").get<std::vector<double>>();
      m.gru.b_cand = g.at("b_cand").get<std::vector<double>>();
      if (m.gru.b_update.size() != h || m.gru.b_reset.size() != h ||
          m.gru.b_cand.size() != h) {
        throw_data("checkpoint bias width does not match the hidden size");
      }
    } else {
      const nlohmann::json& s = j.at("simple");
      m.simple.input_dim = d;
      m.simple.hidden_dim = h;
      m.simple.recurrent = matrix_from_json(s.at("recurrent"), h, h);
      m.simple.input = matrix_from_json(s.at("input"), h, d);
    }
    return cp;
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("checkpoint is missing fields: ") + e.what());
  }
}

}  // namespace tge
