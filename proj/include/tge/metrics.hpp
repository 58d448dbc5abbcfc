#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tge/model.hpp"
#include "tge/split.hpp"
#include "tge/static_embed.hpp"
#include "tge/temporal_graph.hpp"

namespace tge {

struct ScoredPair {
  NodeId src = 0;
  NodeId dst = 0;
  double label = 0.0;
  double score = 0.0;
};

struct MetricReport {
  double roc_auc = 0.0;
  double pr_auc = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

// Probability that a random positive outranks a random negative,
// computed from average ranks so ties contribute one half. Needs both
// classes present.
double roc_auc(std::span<const ScoredPair> pairs);

// Average precision: mean of precision-at-rank over the positives, with
// ties broken by a stable sort on (-score, original index). Needs at
// least one positive.
double pr_auc(std::span<const ScoredPair> pairs);

MetricReport evaluate_pairs(std::span<const ScoredPair> pairs);

// Scores every test pair of the split with the model and reduces to a
// report.
MetricReport evaluate_model(const ModelState& model,
                            const EmbeddingSeries& aligned,
                            const DataSplit& split);

// Builds labelled, scored test pairs from the split. `scores` must hold
// positives first, then negatives, matching the split order.
std::vector<ScoredPair> scored_test_pairs(const DataSplit& split,
                                          std::span<const double> scores);

// One "src,dst,label,score" line per pair, with a header row.
std::string scored_pairs_to_csv(std::span<const ScoredPair> pairs);

}  // namespace tge
