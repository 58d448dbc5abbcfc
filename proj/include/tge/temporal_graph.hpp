#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace tge {

using NodeId = std::uint32_t;

struct TemporalEdge {
  NodeId src;
  NodeId dst;
  double timestamp;

  bool operator==(const TemporalEdge&) const = default;
};

// Timestamped edge list over a dense node universe [0, num_nodes).
// Undirected graphs keep each edge with src <= dst; duplicate pairs at
// different timestamps are kept as separate occurrences.
struct TemporalGraph {
  std::size_t num_nodes = 0;
  bool directed = false;
  std::vector<TemporalEdge> edges;

  bool operator==(const TemporalGraph&) const = default;
};

// Parses "src dst timestamp" lines (whitespace or comma separated,
// '#' comments and blank lines skipped). Raw node ids are re-indexed
// densely in first-appearance order. Throws a data error with the line
// number on malformed input or negative timestamps.
TemporalGraph parse_edge_list(std::istream& in, bool directed);

// Inverse of parse_edge_list for graphs already in dense form. Timestamps
// are printed with round-trip precision.
void write_edge_list(const TemporalGraph& g, std::ostream& out);

// (src, dst) canonicalized for the graph's directedness: unordered pairs
// are stored with src <= dst.
std::pair<NodeId, NodeId> canonical_pair(NodeId a, NodeId b, bool directed);

}  // namespace tge
