#include "tge/temporal_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <unordered_map>

#include "tge/errors.hpp"

namespace tge {

namespace {

[[noreturn]] void parse_error(std::size_t line_no, const std::string& what) {
  throw_data("edge list parse error at line " + std::to_string(line_no) +
             ": " + what);
}

// Splits on any run of spaces, tabs or commas.
std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::uint64_t parse_node_token(const std::string& tok, std::size_t line_no) {
  if (tok.empty()) parse_error(line_no, "empty node id");
  for (char c : tok) {
    if (c < '0' || c > '9') {
      parse_error(line_no, "node id '" + tok + "' is not a non-negative integer");
    }
  }
  errno = 0;
  char* end = nullptr;
  const std::uint64_t value = std::strtoull(tok.c_str(), &end, 10);
  if (errno != 0 || end != tok.c_str() + tok.size()) {
    parse_error(line_no, "node id '" + tok + "' out of range");
  }
  return value;
}

double parse_time_token(const std::string& tok, std::size_t line_no) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(tok.c_str(), &end);
  if (errno != 0 || end != tok.c_str() + tok.size() || !std::isfinite(value)) {
    parse_error(line_no, "timestamp '" + tok + "' is not a finite number");
  }
  if (value < 0.0) {
    parse_error(line_no, "negative timestamp " + tok);
  }
  return value;
}

}  // namespace

std::pair<NodeId, NodeId> canonical_pair(NodeId a, NodeId b, bool directed) {
  if (!directed && a > b) std::swap(a, b);
  return {a, b};
}

TemporalGraph parse_edge_list(std::istream& in, bool directed) {
  TemporalGraph g;
  g.directed = directed;

  std::unordered_map<std::uint64_t, NodeId> dense_id;
  auto intern = [&](std::uint64_t raw) -> NodeId {
    auto [it, inserted] = dense_id.try_emplace(
        raw, static_cast<NodeId>(dense_id.size()));
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    if (tokens.size() != 3) {
      parse_error(line_no, "expected 'src dst timestamp', got " +
                               std::to_string(tokens.size()) + " fields");
    }
    const NodeId src = intern(parse_node_token(tokens[0], line_no));
    const NodeId dst = intern(parse_node_token(tokens[1], line_no));
    const double ts = parse_time_token(tokens[2], line_no);
    const auto [a, b] = canonical_pair(src, dst, directed);
    g.edges.push_back(TemporalEdge{a, b, ts});
  }
  g.num_nodes = dense_id.size();
  return g;
}

void write_edge_list(const TemporalGraph& g, std::ostream& out) {
  char buf[64];
  for (const TemporalEdge& e : g.edges) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.timestamp);
    out << e.src << ' ' << e.dst << ' ' << buf << '\n';
  }
}

}  // namespace tge
