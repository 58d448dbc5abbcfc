#include "tge/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "tge/errors.hpp"
#include "tge/rng.hpp"

namespace tge {

namespace {

// Shared sampler core over an explicit forbidden set.
std::vector<NodePair> sample_pairs(std::size_t num_nodes, bool directed,
                                   std::size_t count, std::uint64_t seed,
                                   const std::set<NodePair>& forbidden) {
  const std::size_t n = num_nodes;
  const std::size_t total_pairs = directed ? n * (n - 1) : n * (n - 1) / 2;
  if (total_pairs < forbidden.size()) {
    throw_data("negative sampling: forbidden set exceeds pair universe");
  }
  const std::size_t available = total_pairs - forbidden.size();
  if (count > available) {
    throw_data("negative sampling: requested " + std::to_string(count) +
               " pairs but only " + std::to_string(available) +
               " non-edges exist");
  }

  Rng rng(seed);
  std::vector<NodePair> result;
  result.reserve(count);

  // Dense or tiny universes: enumerate the allowed pairs and draw without
  // replacement. Sparse large universes: rejection sample.
  if (total_pairs <= 2'000'000 || available < 2 * count) {
    std::vector<NodePair> allowed;
    allowed.reserve(available);
    for (NodeId i = 0; i < n; ++i) {
      const NodeId j_begin = directed ? 0 : i + 1;
      for (NodeId j = j_begin; j < n; ++j) {
        if (i == j) continue;
        const NodePair p{i, j};
        if (!forbidden.count(p)) allowed.push_back(p);
      }
    }
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t pick =
          k + static_cast<std::size_t>(rng.next_below(allowed.size() - k));
      std::swap(allowed[k], allowed[pick]);
      result.push_back(allowed[k]);
    }
    return result;
  }

  std::set<NodePair> chosen;
  while (result.size() < count) {
    const NodeId a = static_cast<NodeId>(rng.next_below(n));
    const NodeId b = static_cast<NodeId>(rng.next_below(n));
    if (a == b) continue;
    const NodePair p = canonical_pair(a, b, directed);
    if (forbidden.count(p) || !chosen.insert(p).second) continue;
    result.push_back(p);
  }
  return result;
}

std::set<NodePair> canonical_set(const std::vector<NodePair>& pairs,
                                 bool directed, std::size_t num_nodes) {
  std::set<NodePair> out;
  for (const NodePair& p : pairs) {
    if (p.first >= num_nodes || p.second >= num_nodes) continue;
    if (p.first == p.second) continue;
    out.insert(canonical_pair(p.first, p.second, directed));
  }
  return out;
}

}  // namespace

std::vector<NodePair> sample_negatives(const TemporalGraph& g,
                                       std::size_t count, std::uint64_t seed,
                                       const std::vector<NodePair>& exclusion) {
  if (g.num_nodes < 2) throw_data("negative sampling needs >= 2 nodes");
  std::set<NodePair> forbidden = canonical_set(exclusion, g.directed, g.num_nodes);
  for (const TemporalEdge& e : g.edges) {
    if (e.src == e.dst) continue;
    forbidden.insert(canonical_pair(e.src, e.dst, g.directed));
  }
  return sample_pairs(g.num_nodes, g.directed, count, seed, forbidden);
}

DataSplit temporal_split(const SnapshotSeries& series, double train_fraction,
                         std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw_data("train_fraction must lie strictly between 0 and 1");
  }
  const std::size_t total = series.edges.size();
  if (total == 0) throw_data("temporal_split: no edges");

  std::vector<double> sorted_ts;
  sorted_ts.reserve(total);
  for (const TemporalEdge& e : series.edges) sorted_ts.push_back(e.timestamp);
  std::sort(sorted_ts.begin(), sorted_ts.end());

  const std::size_t pivot_rank = static_cast<std::size_t>(
      std::ceil(train_fraction * static_cast<double>(total)));
  const double pivot = sorted_ts[pivot_rank - 1];

  DataSplit split;
  split.pivot_time = pivot;

  // Distinct pairs, classified by their occurrence pattern around the pivot.
  std::set<NodePair> seen_train;
  std::set<NodePair> seen_test;
  for (const TemporalEdge& e : series.edges) {
    const NodePair key = canonical_pair(e.src, e.dst, series.directed);
    if (e.timestamp <= pivot) {
      if (seen_train.insert(key).second) split.train_positives.push_back(key);
    }
  }
  for (const TemporalEdge& e : series.edges) {
    const NodePair key = canonical_pair(e.src, e.dst, series.directed);
    if (e.timestamp > pivot && !seen_train.count(key)) {
      if (seen_test.insert(key).second) split.test_positives.push_back(key);
    }
  }
  if (split.test_positives.empty()) {
    throw_data("temporal_split: empty test partition (all edges at or before "
               "the pivot)");
  }

  // Negatives exclude every pair that was ever positive; the edge list
  // below carries all of them, so no extra exclusion is needed. The two
  // partitions draw independently and may overlap — insisting on disjoint
  // negatives can be infeasible on dense graphs where the positives
  // outnumber the never-connected pairs.
  TemporalGraph flat;
  flat.num_nodes = series.num_nodes;
  flat.directed = series.directed;
  flat.edges = series.edges;

  split.train_negatives = sample_negatives(
      flat, split.train_positives.size(), derive_seed(seed, 1), {});
  split.test_negatives = sample_negatives(
      flat, split.test_positives.size(), derive_seed(seed, 2), {});
  return split;
}

}  // namespace tge
