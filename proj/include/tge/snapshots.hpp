#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tge/temporal_graph.hpp"

namespace tge {

// How raw timestamps are cut into snapshot bins.
//   day / week / month: calendar bins over epoch-second timestamps
//   index:              one bin per distinct timestamp
//   count K:            K bins with (near) equal edge counts
struct Granularity {
  enum class Kind { day, week, month, index, count };
  Kind kind = Kind::count;
  std::size_t count = 10;

  static Granularity day() { return {Kind::day, 0}; }
  static Granularity week() { return {Kind::week, 0}; }
  static Granularity month() { return {Kind::month, 0}; }
  static Granularity index() { return {Kind::index, 0}; }
  static Granularity by_count(std::size_t k) { return {Kind::count, k}; }

  // Parses "day" | "week" | "month" | "index" | "count:K".
  static Granularity parse(const std::string& text);
  std::string to_string() const;
};

// All timestamps at which one node pair (re)appears, as snapshot bin
// indices, ascending and unique.
struct PairTimeline {
  NodeId src;
  NodeId dst;
  std::vector<std::uint32_t> bins;

  std::uint32_t first_bin() const { return bins.front(); }
  // Largest occurrence bin <= snapshot, or -1 if none.
  int last_seen(std::uint32_t snapshot) const;
};

// Cumulative snapshot view of a temporal graph: snapshot s holds every
// edge with timestamp <= boundaries[s].
struct SnapshotSeries {
  std::size_t num_nodes = 0;
  bool directed = false;
  std::vector<double> boundaries;    // ascending, strictly increasing
  std::vector<TemporalEdge> edges;   // occurrences in original order
  std::vector<PairTimeline> pairs;   // distinct pairs, first-seen order

  std::size_t num_snapshots() const { return boundaries.size(); }

  // Edge occurrences in snapshot s (timestamp <= boundaries[s]).
  std::size_t edge_count_at(std::uint32_t snapshot) const;
  // Distinct pairs present in snapshot s.
  std::size_t pair_count_at(std::uint32_t snapshot) const;

  std::string to_json() const;
  static SnapshotSeries from_json(const std::string& text);
};

SnapshotSeries bin_snapshots(const TemporalGraph& g, const Granularity& how);

}  // namespace tge
