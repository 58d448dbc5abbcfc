#include "tge/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "tge/errors.hpp"
#include "tge/rng.hpp"
#include "tge/split.hpp"
#include "tge/version.hpp"

namespace tge {
namespace {

// Seed streams hanging off RunConfig::seed. Keeping them distinct makes
// every stage independently reproducible.
constexpr std::uint64_t kStreamEmbed = 10;
constexpr std::uint64_t kStreamSplit = 11;
constexpr std::uint64_t kStreamModel = 12;
constexpr std::uint64_t kStreamRandomScorer = 13;

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("[") + name + "] " + e.what());
  }
}

nlohmann::json output_envelope(const RunConfig& cfg) {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config"] = nlohmann::json::parse(config_echo_json(cfg));
  return j;
}

// "# key: value" comment header for CSV outputs.
std::string csv_header(const RunConfig& cfg) {
  std::string out;
  out += std::string("# tool: ") + kToolName + " " + kToolVersion + "\n";
  out += "# config: " + config_echo_json(cfg) + "\n";
  return out;
}

nlohmann::json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw_data(path + " is not valid JSON: " + e.what());
  }
}

// Embeddings as the model consumes them: static pass plus (for T >= 2)
// the recursive rotation into a common frame.
EmbeddingSeries aligned_embeddings(const SnapshotSeries& series,
                                   const RunConfig& cfg) {
  EmbeddingSeries embeddings = stage("embed", [&] {
    return embed_series(series, cfg.embed_config(),
                        derive_seed(cfg.seed, kStreamEmbed));
  });
  if (embeddings.num_snapshots() < 2) return embeddings;
  return stage("align", [&] {
    return align_series(embeddings, cfg.alignment_options()).aligned;
  });
}

DataSplit build_split(const SnapshotSeries& series, const RunConfig& cfg) {
  return stage("split", [&] {
    return temporal_split(series, cfg.train_fraction,
                          derive_seed(cfg.seed, kStreamSplit));
  });
}

double double_field(const nlohmann::json& j, const char* key) {
  return j.at(key).get<double>();
}

}  // namespace

ScorerKind parse_scorer(const std::string& name) {
  if (name == "model") return ScorerKind::model;
  if (name == "random") return ScorerKind::random;
  if (name == "oracle") return ScorerKind::oracle;
  throw_usage("unknown scorer '" + name +
              "' (expected model, random or oracle)");
}

std::string to_string(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::model: return "model";
    case ScorerKind::random: return "random";
    default: return "oracle";
  }
}

void RunConfig::validate() const {
  if (out_dir.empty()) throw_usage("'out' must name a directory");
  if (dim == 0) throw_usage("'dim' must be >= 1");
  if (layers == 0) throw_usage("'layers' must be >= 1");
  if (!(tau > 0.0)) throw_usage("'tau' must be > 0");
  if (batch == 0) throw_usage("'batch' must be >= 1");
  if (!(learning_rate > 0.0)) throw_usage("'lr' must be > 0");
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw_usage("'train-fraction' must lie strictly between 0 and 1");
  }
  if (align_direction != "forward" && align_direction != "transpose") {
    throw_usage("'align-direction' must be forward or transpose, got '" +
                align_direction + "'");
  }
  parse_cell_kind(cell);
  parse_scorer(scorer);
  granularity_spec();  // throws on malformed granularity
}

Granularity RunConfig::granularity_spec() const {
  if (granularity == "count") {
    if (snapshots == 0) throw_usage("'snapshots' must be >= 1");
    return Granularity::by_count(snapshots);
  }
  return Granularity::parse(granularity);
}

AlignmentOptions RunConfig::alignment_options() const {
  AlignmentOptions opts;
  opts.transpose_basis = align_direction == "transpose";
  return opts;
}

StaticEmbedConfig RunConfig::embed_config() const {
  StaticEmbedConfig ec;
  ec.dim = dim;
  ec.num_layers = layers;
  ec.tau = tau;
  ec.scalar_decay = scalar_decay;
  return ec;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig tc;
  tc.epochs = epochs;
  tc.batch_size = batch;
  tc.learning_rate = learning_rate;
  tc.seed = derive_seed(seed, kStreamModel);
  tc.cell = parse_cell_kind(cell);
  tc.hidden_dim = hidden == 0 ? dim : hidden;
  return tc;
}

std::string config_echo_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["edges"] = cfg.edges_path;
  j["out"] = cfg.out_dir;
  j["granularity"] = cfg.granularity;
  j["snapshots"] = cfg.snapshots;
  j["dim"] = cfg.dim;
  j["layers"] = cfg.layers;
  j["tau"] = cfg.tau;
  j["cell"] = cfg.cell;
  j["hidden"] = cfg.hidden;
  j["epochs"] = cfg.epochs;
  j["batch"] = cfg.batch;
  j["lr"] = cfg.learning_rate;
  j["seed"] = cfg.seed;
  j["train_fraction"] = cfg.train_fraction;
  j["align_direction"] = cfg.align_direction;
  j["scalar_decay"] = cfg.scalar_decay;
  j["symmetrize"] = cfg.symmetrize;
  j["scorer"] = cfg.scorer;
  return j.dump();
}

RunConfig config_from_echo(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("config echo is not valid JSON: ") + e.what());
  }
  try {
    RunConfig cfg;
    cfg.edges_path = j.at("edges").get<std::string>();
    cfg.out_dir = j.at("out").get<std::string>();
    cfg.granularity = j.at("granularity").get<std::string>();
    cfg.snapshots = j.at("snapshots").get<std::size_t>();
    cfg.dim = j.at("dim").get<std::size_t>();
    cfg.layers = j.at("layers").get<std::size_t>();
    cfg.tau = double_field(j, "tau");
    cfg.cell = j.at("cell").get<std::string>();
    cfg.hidden = j.at("hidden").get<std::size_t>();
    cfg.epochs = j.at("epochs").get<std::size_t>();
    cfg.batch = j.at("batch").get<std::size_t>();
    cfg.learning_rate = double_field(j, "lr");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.train_fraction = double_field(j, "train_fraction");
    cfg.align_direction = j.at("align_direction").get<std::string>();
    cfg.scalar_decay = j.at("scalar_decay").get<bool>();
    cfg.symmetrize = j.at("symmetrize").get<bool>();
    cfg.scorer = j.at("scorer").get<std::string>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw_data(std::string("config echo is missing fields: ") + e.what());
  }
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw_data("read failed on " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) {
      throw_data("cannot create directory " + p.parent_path().string() +
                 ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data("cannot open " + path + " for writing");
  out << content;
  out.close();
  if (!out) throw_data("write failed on " + path);
}

StatsBlock graph_stats(const TemporalGraph& g) {
  StatsBlock s;
  s.num_nodes = g.num_nodes;
  s.num_events = g.edges.size();
  std::set<NodePair> pairs;
  for (const TemporalEdge& e : g.edges) pairs.insert({e.src, e.dst});
  s.distinct_pairs = pairs.size();
  if (g.num_nodes > 0) {
    const double scale = g.directed ? 1.0 : 2.0;
    s.avg_degree = scale * static_cast<double>(s.num_events) /
                   static_cast<double>(g.num_nodes);
  }
  return s;
}

RunPaths RunPaths::in(const std::string& out_dir) {
  RunPaths p;
  p.snapshots = out_dir + "/snapshots.json";
  p.stats = out_dir + "/stats.json";
  p.checkpoint = out_dir + "/checkpoint.json";
  p.losses = out_dir + "/losses.csv";
  p.manifest = out_dir + "/manifest.json";
  p.report = out_dir + "/report.json";
  p.scores = out_dir + "/scores.csv";
  return p;
}

SnapshotsOutcome run_snapshots(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.edges_path.empty()) throw_usage("'edges' is required");
  const RunPaths paths = RunPaths::in(cfg.out_dir);

  const TemporalGraph g = stage("parse", [&] {
    std::ifstream in(cfg.edges_path);
    if (!in) throw_data("cannot open " + cfg.edges_path + " for reading");
    return parse_edge_list(in, /*directed=*/!cfg.symmetrize);
  });
  if (g.edges.empty()) throw_data("[parse] no edges in " + cfg.edges_path);

  const SnapshotSeries series =
      stage("bin", [&] { return bin_snapshots(g, cfg.granularity_spec()); });

  SnapshotsOutcome outcome;
  outcome.stats = graph_stats(g);
  outcome.num_snapshots = series.num_snapshots();

  nlohmann::json snap = output_envelope(cfg);
  snap["series"] = nlohmann::json::parse(series.to_json());
  write_text_file(paths.snapshots, snap.dump());

  nlohmann::json stats = output_envelope(cfg);
  stats["num_nodes"] = outcome.stats.num_nodes;
  stats["num_edges"] = outcome.stats.num_events;
  stats["distinct_pairs"] = outcome.stats.distinct_pairs;
  stats["avg_degree"] = outcome.stats.avg_degree;
  stats["num_snapshots"] = outcome.num_snapshots;
  write_text_file(paths.stats, stats.dump());
  return outcome;
}

TrainOutcome run_train(const RunConfig& cfg) {
  cfg.validate();
  const RunPaths paths = RunPaths::in(cfg.out_dir);

  const std::string snapshots_text = read_text_file(paths.snapshots);
  const nlohmann::json snap_doc = stage("snapshots-load", [&] {
    nlohmann::json j = parse_json_file(paths.snapshots);
    if (!j.contains("series")) {
      throw_data(paths.snapshots + " has no 'series' block");
    }
    return j;
  });
  const SnapshotSeries series = stage("snapshots-load", [&] {
    return SnapshotSeries::from_json(snap_doc.at("series").dump());
  });

  const EmbeddingSeries aligned = aligned_embeddings(series, cfg);
  const DataSplit split = build_split(series, cfg);

  const TrainConfig tc = cfg.train_config();
  ModelState model = ModelState::init(tc.cell, cfg.dim, tc.hidden_dim,
                                      derive_seed(cfg.seed, kStreamModel));
  AdamState adam =
      AdamState::init(model.tensor_sizes(), {.learning_rate = tc.learning_rate});
  const std::vector<LinkExample> examples =
      make_examples(split.train_positives, split.train_negatives);
  const TrainResult trained =
      stage("train", [&] { return fit(model, adam, aligned, examples, tc); });

  nlohmann::json ckpt = output_envelope(cfg);
  ckpt["checkpoint"] = nlohmann::json::parse(
      checkpoint_to_json(model, tc, adam, trained.loss_history));
  const std::string checkpoint_text = ckpt.dump();
  write_text_file(paths.checkpoint, checkpoint_text);

  std::string losses = csv_header(cfg) + "epoch,mean_loss\n";
  char line[64];
  for (std::size_t e = 0; e < trained.loss_history.size(); ++e) {
    std::snprintf(line, sizeof(line), "%zu,%.17g\n", e,
                  trained.loss_history[e]);
    losses += line;
  }
  write_text_file(paths.losses, losses);

  TrainOutcome outcome;
  outcome.loss_history = trained.loss_history;
  outcome.checkpoint_hash = fnv1a_hex(checkpoint_text);

  nlohmann::json manifest = output_envelope(cfg);
  manifest["snapshots_hash"] = fnv1a_hex(snapshots_text);
  manifest["checkpoint_hash"] = outcome.checkpoint_hash;
  write_text_file(paths.manifest, manifest.dump());
  return outcome;
}

EvaluateOutcome run_evaluate(const RunConfig& cfg) {
  cfg.validate();
  const RunPaths paths = RunPaths::in(cfg.out_dir);

  const std::string snapshots_text = read_text_file(paths.snapshots);
  const std::string checkpoint_text = read_text_file(paths.checkpoint);
  const nlohmann::json manifest = parse_json_file(paths.manifest);

  const auto check_hash = [&](const char* key, const std::string& text,
                              const std::string& path) {
    std::string want;
    try {
      want = manifest.at(key).get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw_data(paths.manifest + " lacks '" + key + "'");
    }
    const std::string got = fnv1a_hex(text);
    if (got != want) {
      throw_data(path + " does not match the manifest (hash " + got +
                 ", manifest says " + want + "); refusing to evaluate");
    }
  };
  check_hash("snapshots_hash", snapshots_text, paths.snapshots);
  check_hash("checkpoint_hash", checkpoint_text, paths.checkpoint);

  // The run is reconstructed from the manifest; only the scorer comes
  // from this invocation.
  RunConfig run_cfg = config_from_echo(manifest.at("config").dump());
  run_cfg.scorer = cfg.scorer;
  run_cfg.out_dir = cfg.out_dir;
  run_cfg.validate();

  const nlohmann::json snap_doc = parse_json_file(paths.snapshots);
  const SnapshotSeries series = stage("snapshots-load", [&] {
    return SnapshotSeries::from_json(snap_doc.at("series").dump());
  });
  const nlohmann::json ckpt_doc = parse_json_file(paths.checkpoint);
  const Checkpoint checkpoint = stage("checkpoint-load", [&] {
    if (!ckpt_doc.contains("checkpoint")) {
      throw_data(paths.checkpoint + " has no 'checkpoint' block");
    }
    return checkpoint_from_json(ckpt_doc.at("checkpoint").dump());
  });

  const auto t0 = std::chrono::steady_clock::now();
  const EmbeddingSeries aligned = aligned_embeddings(series, run_cfg);
  const DataSplit split = build_split(series, run_cfg);

  std::vector<NodePair> pairs = split.test_positives;
  pairs.insert(pairs.end(), split.test_negatives.begin(),
               split.test_negatives.end());

  std::vector<double> scores;
  const ScorerKind scorer = parse_scorer(run_cfg.scorer);
  if (scorer == ScorerKind::model) {
    scores = stage("score", [&] {
      return score_pairs(checkpoint.model, aligned, pairs);
    });
  } else if (scorer == ScorerKind::random) {
    Rng rng(derive_seed(run_cfg.seed, kStreamRandomScorer));
    scores.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      scores.push_back(rng.next_double());
    }
  } else {
    scores.assign(split.test_positives.size(), 1.0);
    scores.resize(pairs.size(), 0.0);
  }

  const std::vector<ScoredPair> scored = scored_test_pairs(split, scores);
  EvaluateOutcome outcome;
  outcome.report = stage("metrics", [&] { return evaluate_pairs(scored); });
  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  // Timing stays out of the report file so identical runs stay
  // byte-identical; the CLI prints it separately.
  nlohmann::json report = output_envelope(run_cfg);
  report["roc_auc"] = outcome.report.roc_auc;
  report["pr_auc"] = outcome.report.pr_auc;
  report["pr_auc_definition"] = "average_precision";
  report["positives"] = outcome.report.positives;
  report["negatives"] = outcome.report.negatives;
  report["scorer"] = run_cfg.scorer;
  write_text_file(paths.report, report.dump());

  write_text_file(paths.scores, csv_header(run_cfg) + scored_pairs_to_csv(scored));
  return outcome;
}

PipelineOutcome run_pipeline(const RunConfig& cfg) {
  PipelineOutcome outcome;
  outcome.snapshots = run_snapshots(cfg);
  outcome.train = run_train(cfg);
  outcome.evaluate = run_evaluate(cfg);
  return outcome;
}

}  // namespace tge
