#include "tge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "tge/errors.hpp"

namespace tge {
namespace {

void check_finite_scores(std::span<const ScoredPair> pairs) {
  for (const ScoredPair& p : pairs) {
    if (!std::isfinite(p.score)) {
      throw_numeric("non-finite score for pair " + std::to_string(p.src) +
                    "," + std::to_string(p.dst));
    }
  }
}

}  // namespace

double roc_auc(std::span<const ScoredPair> pairs) {
  check_finite_scores(pairs);
  std::size_t num_pos = 0;
  for (const ScoredPair& p : pairs) num_pos += p.label != 0.0;
  const std::size_t num_neg = pairs.size() - num_pos;
  if (num_pos == 0 || num_neg == 0) {
    throw_data("ranking quality needs both classes; got " +
               std::to_string(num_pos) + " positives and " +
               std::to_string(num_neg) + " negatives");
  }

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a].score < pairs[b].score;
  });

  // Average rank within each tie group, 1-based ranks.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() &&
           pairs[order[j]].score == pairs[order[i]].score) {
      ++j;
    }
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // (i+1 + j)/2
    for (std::size_t k = i; k < j; ++k) {
      if (pairs[order[k]].label != 0.0) positive_rank_sum += avg_rank;
    }
    i = j;
  }

  const double np = static_cast<double>(num_pos);
  const double nn = static_cast<double>(num_neg);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double pr_auc(std::span<const ScoredPair> pairs) {
  check_finite_scores(pairs);
  std::size_t num_pos = 0;
  for (const ScoredPair& p : pairs) num_pos += p.label != 0.0;
  if (num_pos == 0) {
    throw_data("average precision needs at least one positive");
  }

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (pairs[a].score != pairs[b].score) {
                       return pairs[a].score > pairs[b].score;
                     }
                     return a < b;
                   });

  double sum_precision = 0.0;
  std::size_t true_positives = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (pairs[order[rank]].label != 0.0) {
      ++true_positives;
      sum_precision += static_cast<double>(true_positives) /
                       static_cast<double>(rank + 1);
    }
  }
  return sum_precision / static_cast<double>(num_pos);
}

MetricReport evaluate_pairs(std::span<const ScoredPair> pairs) {
  MetricReport report;
  report.roc_auc = roc_auc(pairs);
  report.pr_auc = pr_auc(pairs);
  for (const ScoredPair& p : pairs) {
    if (p.label != 0.0) {
      ++report.positives;
    } else {
      ++report.negatives;
    }
  }
  return report;
}

MetricReport evaluate_model(const ModelState& model,
                            const EmbeddingSeries& aligned,
                            const DataSplit& split) {
  std::vector<NodePair> pairs = split.test_positives;
  pairs.insert(pairs.end(), split.test_negatives.begin(),
               split.test_negatives.end());
  const std::vector<double> scores = score_pairs(model, aligned, pairs);
  return evaluate_pairs(scored_test_pairs(split, scores));
}

std::vector<ScoredPair> scored_test_pairs(const DataSplit& split,
                                          std::span<const double> scores) {
  const std::size_t total =
      split.test_positives.size() + split.test_negatives.size();
  if (scores.size() != total) {
    throw_data("got " + std::to_string(scores.size()) + " scores for " +
               std::to_string(total) + " test pairs");
  }
  std::vector<ScoredPair> out;
  out.reserve(total);
  std::size_t k = 0;
  for (const NodePair& p : split.test_positives) {
    out.push_back({p.first, p.second, 1.0, scores[k++]});
  }
  for (const NodePair& p : split.test_negatives) {
    out.push_back({p.first, p.second, 0.0, scores[k++]});
  }
  return out;
}

std::string scored_pairs_to_csv(std::span<const ScoredPair> pairs) {
  std::string out = "src,dst,label,score\n";
  char line[128];
  for (const ScoredPair& p : pairs) {
    std::snprintf(line, sizeof(line), "%u,%u,%d,%.17g\n", p.src, p.dst,
                  p.label != 0.0 ? 1 : 0, p.score);
    out += line;
  }
  return out;
}

}  // namespace tge
