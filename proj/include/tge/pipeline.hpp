#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tge/alignment.hpp"
#include "tge/metrics.hpp"
#include "tge/model.hpp"
#include "tge/snapshots.hpp"
#include "tge/static_embed.hpp"

namespace tge {

enum class ScorerKind { model, random, oracle };

ScorerKind parse_scorer(const std::string& name);
std::string to_string(ScorerKind kind);

// Everything a run needs, assembled from a config file and/or flags.
struct RunConfig {
  std::string edges_path;
  std::string out_dir = "out";
  std::string granularity = "count";  // day|week|month|index|count[:K]
  std::size_t snapshots = 10;         // K for plain "count"
  std::size_t dim = 128;
  std::size_t layers = 3;
  double tau = 1.0;
  std::string cell = "gru";
  std::size_t hidden = 0;  // 0: match dim
  std::size_t epochs = 100;
  std::size_t batch = 512;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  double train_fraction = 0.7;
  std::string align_direction = "forward";  // forward | transpose
  bool scalar_decay = false;
  bool symmetrize = true;  // read edges as undirected
  std::string scorer = "model";  // model | random | oracle

  // Throws a usage error on any out-of-range or unparsable value.
  void validate() const;

  Granularity granularity_spec() const;
  AlignmentOptions alignment_options() const;
  StaticEmbedConfig embed_config() const;
  TrainConfig train_config() const;
};

// The config block embedded in every output file, and its inverse (used
// when a later command rebuilds the run from a manifest).
std::string config_echo_json(const RunConfig& cfg);
RunConfig config_from_echo(const std::string& json_text);

// 64-bit FNV-1a over raw bytes, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

struct StatsBlock {
  std::size_t num_nodes = 0;
  std::size_t num_events = 0;     // edge occurrences
  std::size_t distinct_pairs = 0;
  double avg_degree = 0.0;        // 2|E|/N undirected, |E|/N directed
};

StatsBlock graph_stats(const TemporalGraph& g);

// Output file names inside out_dir.
struct RunPaths {
  std::string snapshots;
  std::string stats;
  std::string checkpoint;
  std::string losses;
  std::string manifest;
  std::string report;
  std::string scores;

  static RunPaths in(const std::string& out_dir);
};

struct SnapshotsOutcome {
  StatsBlock stats;
  std::size_t num_snapshots = 0;
};

// edges file -> snapshots.json + stats.json
SnapshotsOutcome run_snapshots(const RunConfig& cfg);

struct TrainOutcome {
  std::vector<double> loss_history;
  std::string checkpoint_hash;
};

// snapshots.json -> checkpoint.json + losses.csv + manifest.json
TrainOutcome run_train(const RunConfig& cfg);

struct EvaluateOutcome {
  MetricReport report;
  double wall_seconds = 0.0;
};

// snapshots.json + checkpoint.json + manifest.json -> report.json +
// scores.csv. Refuses to run when the stored hashes do not match the
// files on disk; the split is rebuilt from the manifest's seed.
EvaluateOutcome run_evaluate(const RunConfig& cfg);

struct PipelineOutcome {
  SnapshotsOutcome snapshots;
  TrainOutcome train;
  EvaluateOutcome evaluate;
};

PipelineOutcome run_pipeline(const RunConfig& cfg);

}  // namespace tge
