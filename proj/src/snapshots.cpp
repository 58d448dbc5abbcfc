#include "tge/snapshots.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <utility>

#include <nlohmann/json.hpp>

#include "tge/errors.hpp"

namespace tge {

namespace {

constexpr double kSecondsPerDay = 86400.0;
constexpr double kSecondsPerWeek = 7.0 * kSecondsPerDay;

std::int64_t month_key(double timestamp) {
  using namespace std::chrono;
  const auto day_number = static_cast<std::int64_t>(
      std::floor(timestamp / kSecondsPerDay));
  const year_month_day ymd{sys_days{days{day_number}}};
  return static_cast<std::int64_t>(static_cast<int>(ymd.year())) * 12 +
         static_cast<std::int64_t>(static_cast<unsigned>(ymd.month())) - 1;
}

// Boundary per calendar bucket = largest observed timestamp in it, so
// empty buckets never appear and every boundary is witnessed by an edge.
std::vector<double> calendar_boundaries(const std::vector<double>& sorted_ts,
                                        const Granularity& how) {
  std::map<std::int64_t, double> bucket_max;
  for (double ts : sorted_ts) {
    std::int64_t key = 0;
    switch (how.kind) {
      case Granularity::Kind::day:
        key = static_cast<std::int64_t>(std::floor(ts / kSecondsPerDay));
        break;
      case Granularity::Kind::week:
        key = static_cast<std::int64_t>(std::floor(ts / kSecondsPerWeek));
        break;
      case Granularity::Kind::month:
        key = month_key(ts);
        break;
      default:
        break;
    }
    auto [it, inserted] = bucket_max.try_emplace(key, ts);
    if (!inserted) it->second = std::max(it->second, ts);
  }
  std::vector<double> boundaries;
  boundaries.reserve(bucket_max.size());
  for (const auto& [key, ts] : bucket_max) boundaries.push_back(ts);
  return boundaries;
}

std::vector<double> count_boundaries(const std::vector<double>& sorted_ts,
                                     std::size_t k) {
  if (k == 0) throw_data("count granularity needs K >= 1");
  const std::size_t n = sorted_ts.size();
  std::vector<double> boundaries;
  boundaries.reserve(k);
  for (std::size_t bin = 1; bin <= k; ++bin) {
    // Rank of the last edge in bin `bin` is ceil(bin * n / k).
    const std::size_t rank = (bin * n + k - 1) / k;
    boundaries.push_back(sorted_ts[rank - 1]);
  }
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()),
                   boundaries.end());
  return boundaries;
}

std::vector<double> index_boundaries(std::vector<double> sorted_ts) {
  sorted_ts.erase(std::unique(sorted_ts.begin(), sorted_ts.end()),
                  sorted_ts.end());
  return sorted_ts;
}

// First snapshot whose boundary covers the timestamp.
std::uint32_t bin_of(const std::vector<double>& boundaries, double ts) {
  const auto it = std::lower_bound(boundaries.begin(), boundaries.end(), ts);
  return static_cast<std::uint32_t>(it - boundaries.begin());
}

std::vector<PairTimeline> build_pair_timelines(
    const std::vector<TemporalEdge>& edges,
    const std::vector<double>& boundaries, bool directed) {
  std::vector<PairTimeline> pairs;
  std::map<std::pair<NodeId, NodeId>, std::size_t> index;
  for (const TemporalEdge& e : edges) {
    const auto key = canonical_pair(e.src, e.dst, directed);
    auto [it, inserted] = index.try_emplace(key, pairs.size());
    if (inserted) pairs.push_back(PairTimeline{key.first, key.second, {}});
    pairs[it->second].bins.push_back(bin_of(boundaries, e.timestamp));
  }
  for (PairTimeline& p : pairs) {
    std::sort(p.bins.begin(), p.bins.end());
    p.bins.erase(std::unique(p.bins.begin(), p.bins.end()), p.bins.end());
  }
  // Keep first-appearance order deterministic: sort by (first bin, ids).
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const PairTimeline& a, const PairTimeline& b) {
                     return a.first_bin() < b.first_bin();
                   });
  return pairs;
}

}  // namespace

Granularity Granularity::parse(const std::string& text) {
  if (text == "day") return day();
  if (text == "week") return week();
  if (text == "month") return month();
  if (text == "index") return index();
  if (text.rfind("count:", 0) == 0) {
    const std::string num = text.substr(6);
    char* end = nullptr;
    const unsigned long long k = std::strtoull(num.c_str(), &end, 10);
    if (num.empty() || end != num.c_str() + num.size() || k == 0) {
      throw_usage("bad granularity '" + text + "': count:K needs K >= 1");
    }
    return by_count(static_cast<std::size_t>(k));
  }
  throw_usage("unknown granularity '" + text +
              "' (expected day|week|month|index|count:K)");
}

std::string Granularity::to_string() const {
  switch (kind) {
    case Kind::day: return "day";
    case Kind::week: return "week";
    case Kind::month: return "month";
    case Kind::index: return "index";
    case Kind::count: return "count:" + std::to_string(count);
  }
  return "count:" + std::to_string(count);
}

int PairTimeline::last_seen(std::uint32_t snapshot) const {
  auto it = std::upper_bound(bins.begin(), bins.end(), snapshot);
  if (it == bins.begin()) return -1;
  return static_cast<int>(*(it - 1));
}

std::size_t SnapshotSeries::edge_count_at(std::uint32_t snapshot) const {
  if (snapshot >= boundaries.size()) throw_data("snapshot index out of range");
  const double cut = boundaries[snapshot];
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(),
                    [cut](const TemporalEdge& e) { return e.timestamp <= cut; }));
}

std::size_t SnapshotSeries::pair_count_at(std::uint32_t snapshot) const {
  if (snapshot >= boundaries.size()) throw_data("snapshot index out of range");
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [snapshot](const PairTimeline& p) {
        return p.first_bin() <= snapshot;
      }));
}

SnapshotSeries bin_snapshots(const TemporalGraph& g, const Granularity& how) {
  if (g.edges.empty()) throw_data("bin_snapshots: graph has no edges");

  std::vector<double> sorted_ts;
  sorted_ts.reserve(g.edges.size());
  for (const TemporalEdge& e : g.edges) sorted_ts.push_back(e.timestamp);
  std::sort(sorted_ts.begin(), sorted_ts.end());

  std::vector<double> boundaries;
  switch (how.kind) {
    case Granularity::Kind::day:
    case Granularity::Kind::week:
    case Granularity::Kind::month:
      boundaries = calendar_boundaries(sorted_ts, how);
      break;
    case Granularity::Kind::index:
      boundaries = index_boundaries(sorted_ts);
      break;
    case Granularity::Kind::count:
      boundaries = count_boundaries(sorted_ts, how.count);
      break;
  }
  if (boundaries.empty()) throw_data("bin_snapshots: produced zero snapshots");

  SnapshotSeries series;
  series.num_nodes = g.num_nodes;
  series.directed = g.directed;
  series.boundaries = std::move(boundaries);
  series.edges = g.edges;
  series.pairs = build_pair_timelines(series.edges, series.boundaries,
                                      series.directed);
  return series;
}

std::string SnapshotSeries::to_json() const {
  nlohmann::json j;
  j["num_nodes"] = num_nodes;
  j["directed"] = directed;
  j["boundaries"] = boundaries;
  nlohmann::json edge_rows = nlohmann::json::array();
  for (const TemporalEdge& e : edges) {
    edge_rows.push_back({e.src, e.dst, e.timestamp});
  }
  j["edges"] = std::move(edge_rows);
  return j.dump();
}

SnapshotSeries SnapshotSeries::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("snapshot JSON parse failed: ") + e.what());
  }
  SnapshotSeries series;
  try {
    series.num_nodes = j.at("num_nodes").get<std::size_t>();
    series.directed = j.at("directed").get<bool>();
    series.boundaries = j.at("boundaries").get<std::vector<double>>();
    for (const auto& row : j.at("edges")) {
      series.edges.push_back(TemporalEdge{row.at(0).get<NodeId>(),
                                          row.at(1).get<NodeId>(),
                                          row.at(2).get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("snapshot JSON missing field: ") + e.what());
  }
  if (series.boundaries.empty()) throw_data("snapshot JSON has no boundaries");
  if (!std::is_sorted(series.boundaries.begin(), series.boundaries.end())) {
    throw_data("snapshot JSON boundaries are not sorted");
  }
  for (const TemporalEdge& e : series.edges) {
    if (e.src >= series.num_nodes || e.dst >= series.num_nodes) {
      throw_data("snapshot JSON edge references node outside universe");
    }
    if (!(e.timestamp <= series.boundaries.back())) {
      throw_data("snapshot JSON edge timestamp beyond final boundary");
    }
  }
  series.pairs = build_pair_timelines(series.edges, series.boundaries,
                                      series.directed);
  return series;
}

}  // namespace tge
