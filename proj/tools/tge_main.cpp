#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tge/errors.hpp"
#include "tge/pipeline.hpp"
#include "tge/synthetic.hpp"
#include "tge/version.hpp"

namespace {

// The shared run options. They live on the top-level app — config files
// are only processed there — and every subcommand reaches them through
// fallthrough, so each key can also come from a flat "key = value" file
// passed with --config (command-line flags win over file values).
void add_run_options(CLI::App* cmd, tge::RunConfig& cfg) {
  cmd->set_config("--config", "", "config file with key = value lines");
  cmd->allow_config_extras(false);
  cmd->add_option("--edges", cfg.edges_path, "input edge list (src dst time)");
  cmd->add_option("--out", cfg.out_dir, "output directory")
      ->capture_default_str();
  cmd->add_option("--granularity", cfg.granularity,
                  "day|week|month|index|count[:K]")
      ->capture_default_str();
  cmd->add_option("--snapshots", cfg.snapshots,
                  "snapshot count for plain count granularity")
      ->capture_default_str();
  cmd->add_option("--dim", cfg.dim, "embedding width (must be < node count)")
      ->capture_default_str();
  cmd->add_option("--layers", cfg.layers, "graph convolution layers")
      ->capture_default_str();
  cmd->add_option("--tau", cfg.tau, "edge-age decay scale")
      ->capture_default_str();
  cmd->add_option("--cell", cfg.cell, "recurrent cell: gru|simple")
      ->capture_default_str();
  cmd->add_option("--hidden", cfg.hidden, "hidden width (0: match --dim)")
      ->capture_default_str();
  cmd->add_option("--epochs", cfg.epochs, "training epochs")
      ->capture_default_str();
  cmd->add_option("--batch", cfg.batch, "mini-batch size")
      ->capture_default_str();
  cmd->add_option("--lr", cfg.learning_rate, "learning rate")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  cmd->add_option("--train-fraction", cfg.train_fraction,
                  "fraction of edge events before the pivot")
      ->capture_default_str();
  cmd->add_option("--align-direction", cfg.align_direction,
                  "rotation direction: forward|transpose")
      ->capture_default_str();
  cmd->add_flag("--scalar-decay,!--no-scalar-decay", cfg.scalar_decay,
                "plain adjacency-plus-identity instead of per-edge decay");
  cmd->add_flag("--symmetrize,!--no-symmetrize", cfg.symmetrize,
                "treat edges as undirected (default on)");
  cmd->add_option("--scorer", cfg.scorer,
                  "test scorer: model|random|oracle")
      ->capture_default_str();
}

void print_stats(const tge::SnapshotsOutcome& outcome) {
  std::printf("nodes:          %zu\n", outcome.stats.num_nodes);
  std::printf("edge events:    %zu\n", outcome.stats.num_events);
  std::printf("distinct pairs: %zu\n", outcome.stats.distinct_pairs);
  std::printf("avg degree:     %.4f\n", outcome.stats.avg_degree);
  std::printf("snapshots:      %zu\n", outcome.num_snapshots);
}

void print_train(const tge::TrainOutcome& outcome) {
  if (!outcome.loss_history.empty()) {
    std::printf("epochs: %zu  first loss: %.6f  final loss: %.6f\n",
                outcome.loss_history.size(), outcome.loss_history.front(),
                outcome.loss_history.back());
  }
  std::printf("checkpoint hash: %s\n", outcome.checkpoint_hash.c_str());
}

void print_report(const tge::RunConfig& cfg,
                  const tge::EvaluateOutcome& outcome) {
  const tge::RunPaths paths = tge::RunPaths::in(cfg.out_dir);
  std::cout << tge::read_text_file(paths.report) << "\n";
  std::fprintf(stderr, "scoring wall time: %.3f s\n", outcome.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal graph embeddings for link prediction"};
  app.require_subcommand(1);
  app.fallthrough();  // let subcommands reach the shared options below
  app.set_version_flag("--version",
                       std::string(tge::kToolName) + " " + tge::kToolVersion);

  tge::RunConfig cfg;
  add_run_options(&app, cfg);

  CLI::App* snapshots =
      app.add_subcommand("snapshots", "bin an edge list into snapshots");
  CLI::App* train =
      app.add_subcommand("train", "embed, align and fit the link model");
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score the test split of a trained run");
  CLI::App* pipeline =
      app.add_subcommand("pipeline", "snapshots + train + evaluate in one go");

  tge::SyntheticConfig synth_cfg;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand(
      "synth", "write a planted-partition temporal edge list");
  synth->add_option("--nodes", synth_cfg.num_nodes, "node count")
      ->capture_default_str();
  synth->add_option("--snapshots", synth_cfg.num_snapshots, "snapshot count")
      ->capture_default_str();
  synth->add_option("--communities", synth_cfg.communities, "community count")
      ->capture_default_str();
  synth->add_option("--p-in", synth_cfg.p_in, "within-community probability")
      ->capture_default_str();
  synth->add_option("--p-out", synth_cfg.p_out, "cross-community probability")
      ->capture_default_str();
  synth->add_option("--seed", synth_cfg.seed, "generator seed")
      ->capture_default_str();
  synth->add_option("--out-edges", synth_out, "edge list file to write")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (snapshots->parsed()) {
      print_stats(tge::run_snapshots(cfg));
    } else if (train->parsed()) {
      print_train(tge::run_train(cfg));
    } else if (evaluate->parsed()) {
      print_report(cfg, tge::run_evaluate(cfg));
    } else if (pipeline->parsed()) {
      const tge::PipelineOutcome outcome = tge::run_pipeline(cfg);
      print_stats(outcome.snapshots);
      print_train(outcome.train);
      print_report(cfg, outcome.evaluate);
    } else if (synth->parsed()) {
      const tge::TemporalGraph g = tge::generate_synthetic(synth_cfg);
      std::ofstream out(synth_out, std::ios::binary);
      if (!out) tge::throw_data("cannot open " + synth_out + " for writing");
      tge::write_edge_list(g, out);
      if (!out) tge::throw_data("write failed on " + synth_out);
      std::printf("wrote %zu edge events over %zu nodes to %s\n",
                  g.edges.size(), g.num_nodes, synth_out.c_str());
    }
  } catch (const tge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
