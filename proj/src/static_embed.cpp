#include "tge/static_embed.hpp"

#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "tge/errors.hpp"
#include "tge/rng.hpp"

namespace tge {

std::vector<std::uint64_t> layer_seeds(std::uint64_t base,
                                       std::size_t num_layers) {
  std::vector<std::uint64_t> seeds(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) seeds[l] = derive_seed(base, l);
  return seeds;
}

DenseMatrix static_forward(const InfluenceMatrix& influence, std::size_t dim,
                           std::size_t num_layers,
                           std::span<const std::uint64_t> seeds) {
  const std::size_t n = influence.matrix.rows();
  if (num_layers < 1) throw_data("static_forward needs at least one layer");
  if (seeds.size() != num_layers) {
    throw_data("static_forward: expected " + std::to_string(num_layers) +
               " layer seeds, got " + std::to_string(seeds.size()));
  }
  if (dim >= n) {
    throw_data("static_forward: dim " + std::to_string(dim) +
               " must be smaller than the node count " + std::to_string(n) +
               " (the embedding has to compress; lower --dim)");
  }

  // First layer folds the implicit identity features: R1 = A W0.
  DenseMatrix w0 = glorot_init(n, dim, seeds[0]);
  DenseMatrix rep = matmul(influence.matrix, w0);
  for (std::size_t l = 1; l < num_layers; ++l) {
    DenseMatrix wl = glorot_init(dim, dim, seeds[l]);
    rep = matmul(matmul(influence.matrix, rep), wl);
  }
  return rep;
}

EmbeddingSeries embed_series(const SnapshotSeries& series,
                             const StaticEmbedConfig& cfg,
                             std::uint64_t weight_seed) {
  const auto seeds = layer_seeds(weight_seed, cfg.num_layers);
  EmbeddingSeries result;
  result.dim = cfg.dim;
  result.snapshots.reserve(series.num_snapshots());
  for (std::uint32_t s = 0; s < series.num_snapshots(); ++s) {
    const InfluenceMatrix influence =
        influence_matrix(series, s, cfg.tau, cfg.scalar_decay);
    result.snapshots.push_back(
        static_forward(influence, cfg.dim, cfg.num_layers, seeds));
  }
  return result;
}

std::string EmbeddingSeries::to_json() const {
  nlohmann::json j;
  j["dim"] = dim;
  j["num_snapshots"] = snapshots.size();
  j["num_nodes"] = num_nodes();
  nlohmann::json data = nlohmann::json::array();
  for (const DenseMatrix& m : snapshots) {
    data.push_back(std::vector<double>(m.flat().begin(), m.flat().end()));
  }
  j["data"] = std::move(data);
  return j.dump();
}

EmbeddingSeries EmbeddingSeries::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("embedding JSON parse failed: ") + e.what());
  }
  EmbeddingSeries series;
  try {
    series.dim = j.at("dim").get<std::size_t>();
    const auto t = j.at("num_snapshots").get<std::size_t>();
    const auto n = j.at("num_nodes").get<std::size_t>();
    const auto& data = j.at("data");
    if (data.size() != t) throw_data("embedding JSON snapshot count mismatch");
    for (const auto& row : data) {
      const auto values = row.get<std::vector<double>>();
      if (values.size() != n * series.dim) {
        throw_data("embedding JSON matrix size mismatch");
      }
      DenseMatrix m(n, series.dim);
      std::copy(values.begin(), values.end(), m.flat().begin());
      series.snapshots.push_back(std::move(m));
    }
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("embedding JSON missing field: ") + e.what());
  }
  return series;
}

}  // namespace tge
