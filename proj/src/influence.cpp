#include "tge/influence.hpp"

#include <cmath>
#include <string>

#include "tge/errors.hpp"

namespace tge {

InfluenceMatrix influence_matrix(const SnapshotSeries& series,
                                 std::uint32_t snapshot, double tau,
                                 bool scalar_decay) {
  if (snapshot >= series.num_snapshots()) {
    throw_data("influence_matrix: snapshot " + std::to_string(snapshot) +
               " out of range (T=" + std::to_string(series.num_snapshots()) +
               ")");
  }
  if (!(tau > 0.0)) throw_data("influence_matrix: tau must be positive");

  const std::size_t n = series.num_nodes;
  std::vector<SparseMatrix::Entry> entries;
  entries.reserve(series.pairs.size() * 2 + n);

  for (const PairTimeline& p : series.pairs) {
    const int last = p.last_seen(snapshot);
    if (last < 0) continue;  // pair not formed yet
    if (p.src == p.dst) continue;  // diagonal is owned by the self-loop term
    const double age = static_cast<double>(snapshot) - static_cast<double>(last);
    const double weight = scalar_decay ? 1.0 : std::exp(-age / tau);
    entries.push_back({p.src, p.dst, weight});
    if (!series.directed) entries.push_back({p.dst, p.src, weight});
  }
  for (std::size_t i = 0; i < n; ++i) {
    entries.push_back({i, i, 1.0});
  }

  InfluenceMatrix result;
  result.snapshot_index = snapshot;
  result.decay_tau = tau;
  result.matrix = SparseMatrix::from_triplets(n, n, std::move(entries));
  return result;
}

}  // namespace tge
