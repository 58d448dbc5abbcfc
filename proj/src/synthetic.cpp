#include "tge/synthetic.hpp"

#include <string>

#include "tge/errors.hpp"
#include "tge/rng.hpp"

namespace tge {

std::size_t community_of(std::size_t node, std::size_t num_nodes,
                         std::size_t communities) {
  return node * communities / num_nodes;
}

TemporalGraph generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.p_in < 0.0 || cfg.p_in > 1.0 || cfg.p_out < 0.0 ||
      cfg.p_out > 1.0) {
    throw_data("edge probabilities must lie in [0, 1]");
  }
  if (cfg.communities < 2) throw_data("need at least 2 communities");
  if (cfg.num_nodes < cfg.communities) {
    throw_data("need at least one node per community");
  }
  if (cfg.num_snapshots == 0) throw_data("need at least one snapshot");

  TemporalGraph g;
  g.num_nodes = cfg.num_nodes;
  g.directed = false;

  Rng rng(cfg.seed);
  for (std::size_t snap = 0; snap < cfg.num_snapshots; ++snap) {
    for (std::size_t i = 0; i < cfg.num_nodes; ++i) {
      const std::size_t ci = community_of(i, cfg.num_nodes, cfg.communities);
      for (std::size_t j = i + 1; j < cfg.num_nodes; ++j) {
        const std::size_t cj =
            community_of(j, cfg.num_nodes, cfg.communities);
        const double p = ci == cj ? cfg.p_in : cfg.p_out;
        if (rng.next_double() < p) {
          g.edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j),
                             static_cast<double>(snap)});
        }
      }
    }
  }
  if (g.edges.empty()) {
    throw_data("generator produced no edges; raise the probabilities");
  }
  return g;
}

}  // namespace tge
