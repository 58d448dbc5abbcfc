// Acceptance harness: one PASS/FAIL line per criterion, exit 1 on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tge/adam.hpp"
#include "tge/alignment.hpp"
#include "tge/cells.hpp"
#include "tge/errors.hpp"
#include "tge/givens.hpp"
#include "tge/influence.hpp"
#include "tge/matrix.hpp"
#include "tge/metrics.hpp"
#include "tge/model.hpp"
#include "tge/pipeline.hpp"
#include "tge/qr.hpp"
#include "tge/rng.hpp"
#include "tge/snapshots.hpp"
#include "tge/static_embed.hpp"
#include "tge/synthetic.hpp"
#include "tge/temporal_graph.hpp"

namespace {

using namespace tge;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Frozen seeds for the end-to-end fixture (calibrated once, then fixed).
// The generator seed also has to leave enough never-connected pairs for
// the 1:1 negative samples; roughly half the seeds qualify at this
// density and 41 does with the widest margin of those tried.
constexpr std::uint64_t kFixtureGraphSeed = 41;
constexpr std::uint64_t kFixtureRunSeed = 3;

struct Outcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

// Literal re-statement of the rotation kernel, kept separate from the
// library so the two can be compared bit for bit.
AnglePair reference_angles(double x_now, double x_next, double zero_tol) {
  if (x_now == 0.0 || std::abs(x_now) < zero_tol) x_now = 0.0;
  if (x_next == 0.0 || std::abs(x_next) < zero_tol) x_next = 0.0;
  if (x_next == 0.0) return {1.0, 0.0};
  if (std::abs(x_next) > std::abs(x_now)) {
    const double tmp = -x_now / x_next;
    const double cos_beta = 1.0 / std::sqrt(1.0 + tmp * tmp);
    return {tmp * cos_beta, cos_beta};
  }
  const double tmp = -x_next / x_now;
  const double cos_alpha = 1.0 / std::sqrt(1.0 + tmp * tmp);
  return {cos_alpha, tmp * cos_alpha};
}

Outcome check_givens_kernel() {
  Outcome out;
  out.name = "givens-rotation-kernel";
  const auto t0 = Clock::now();
  Rng rng(20240901);
  double worst = 0.0;
  std::size_t mismatches = 0;
  for (int i = 0; i < 100000; ++i) {
    // Mixed magnitudes, exact zeros and sub-tolerance noise included.
    const auto draw = [&]() -> double {
      const std::uint64_t kind = rng.next_below(20);
      if (kind == 0) return 0.0;
      if (kind == 1) return rng.next_symmetric(1e-13);  // below zero_tol
      const double mag = std::pow(10.0, rng.next_symmetric(8.0));
      return rng.next_symmetric(mag);
    };
    const double a = draw();
    const double b = draw();
    const AnglePair got = givens_angles(a, b);
    const AnglePair want = reference_angles(a, b, kDefaultZeroTol);
    if (got.cos_alpha != want.cos_alpha || got.cos_beta != want.cos_beta) {
      ++mismatches;
    }
    const double unit = got.cos_alpha * got.cos_alpha +
                        got.cos_beta * got.cos_beta;
    worst = std::max(worst, std::abs(unit - 1.0));
  }
  const double elapsed = seconds_since(t0);
  out.pass = worst <= 1e-12 && mismatches == 0 && elapsed < 1.0;
  out.detail = format(
      "100000 pairs, max |cos^2a+cos^2b-1| = %.2e, %zu transcription "
      "mismatches, %.2f s (limit 1 s)",
      worst, mismatches, elapsed);
  return out;
}

Outcome check_qr() {
  Outcome out;
  out.name = "householder-qr";
  const auto t0 = Clock::now();
  double worst_recon = 0.0, worst_ortho = 0.0;
  bool shape_ok = true;
  Rng rng(512);
  for (std::size_t d = 1; d <= 64; ++d) {
    for (int trial = 0; trial < 20; ++trial) {
      DenseMatrix c(d, d);
      for (double& x : c.flat()) x = rng.next_symmetric(2.0);
      const QrFactors f = qr_decompose(c);
      worst_recon = std::max(worst_recon, max_abs_diff(matmul(f.q, f.r), c));
      worst_ortho = std::max(
          worst_ortho,
          max_abs_diff(matmul(transpose(f.q), f.q), DenseMatrix::identity(d)));
      for (std::size_t i = 0; i < d && shape_ok; ++i) {
        if (f.r(i, i) < 0.0) shape_ok = false;
        for (std::size_t j = 0; j < i; ++j) {
          if (f.r(i, j) != 0.0) shape_ok = false;
        }
      }
    }
  }
  const double elapsed = seconds_since(t0);
  out.pass = worst_recon < 1e-10 && worst_ortho < 1e-10 && shape_ok &&
             elapsed < 5.0;
  out.detail = format(
      "d=1..64 x20: max ||QR-C|| = %.2e, max ||QtQ-I|| = %.2e, triangular "
      "shape %s, %.2f s (limit 5 s)",
      worst_recon, worst_ortho, shape_ok ? "ok" : "violated", elapsed);
  return out;
}

Outcome check_linear_collapse() {
  Outcome out;
  out.name = "convolution-linearity-collapse";
  Rng rng(808);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    TemporalGraph g;
    g.num_nodes = 8;
    for (NodeId i = 0; i < 8; ++i) {
      for (NodeId j = i + 1; j < 8; ++j) {
        if (rng.next_double() < 0.4) {
          g.edges.push_back({i, j, static_cast<double>(rng.next_below(3))});
        }
      }
    }
    if (g.edges.empty()) g.edges.push_back({0, 1, 0.0});
    const SnapshotSeries s = bin_snapshots(g, Granularity::index());
    const auto last = static_cast<std::uint32_t>(s.num_snapshots() - 1);
    const InfluenceMatrix inf = influence_matrix(s, last, 1.0);

    const std::size_t dim = 4;
    const auto seeds = layer_seeds(3000 + trial, 3);
    const DenseMatrix iterative = static_forward(inf, dim, 3, seeds);

    const DenseMatrix a = inf.matrix.to_dense();
    const DenseMatrix closed = matmul(
        matmul(a, matmul(a, a)),
        matmul(matmul(glorot_init(8, dim, seeds[0]),
                      glorot_init(dim, dim, seeds[1])),
               glorot_init(dim, dim, seeds[2])));
    const double rel = max_abs_diff(iterative, closed) / max_abs(closed);
    worst = std::max(worst, rel);
  }
  out.pass = worst <= 1e-8;
  out.detail = format("50 random 8-node graphs: max relative deviation %.2e "
                      "(limit 1e-8)",
                      worst);
  return out;
}

Outcome check_influence() {
  Outcome out;
  out.name = "influence-decay-matrix";
  bool in_range = true;
  // Entries stay in (0, 1] on a recurring random graph.
  const TemporalGraph g = generate_synthetic({.num_nodes = 40,
                                              .num_snapshots = 6,
                                              .communities = 2,
                                              .p_in = 0.3,
                                              .p_out = 0.05,
                                              .seed = 11});
  const SnapshotSeries s = bin_snapshots(g, Granularity::index());
  for (std::uint32_t snap = 0; snap < s.num_snapshots(); ++snap) {
    const InfluenceMatrix inf = influence_matrix(s, snap, 1.0);
    for (const auto& e : inf.matrix.entries()) {
      if (!(e.value > 0.0 && e.value <= 1.0)) in_range = false;
    }
  }

  // When every edge was just seen the matrix is exactly adjacency plus I.
  std::istringstream fresh_text("0 1 0\n1 2 0\n0 3 0\n");
  const SnapshotSeries fresh =
      bin_snapshots(parse_edge_list(fresh_text, false), Granularity::index());
  const DenseMatrix fresh_dense =
      influence_matrix(fresh, 0, 1.0).matrix.to_dense();
  DenseMatrix expect(4, 4);
  for (std::size_t i = 0; i < 4; ++i) expect(i, i) = 1.0;
  expect(0, 1) = expect(1, 0) = 1.0;
  expect(1, 2) = expect(2, 1) = 1.0;
  expect(0, 3) = expect(3, 0) = 1.0;
  const bool adjacency_exact = fresh_dense == expect;

  // A two-snapshot-old edge under unit decay scale reads exp(-2).
  std::istringstream aged_text("0 1 0\n2 3 1\n2 3 2\n");
  const SnapshotSeries aged =
      bin_snapshots(parse_edge_list(aged_text, false), Granularity::index());
  const DenseMatrix aged_dense =
      influence_matrix(aged, 2, 1.0).matrix.to_dense();
  const double err = std::abs(aged_dense(0, 1) - std::exp(-2.0));

  out.pass = in_range && adjacency_exact && err <= 1e-15;
  out.detail = format("range %s, fresh matrix %s, |w - e^-2| = %.2e "
                      "(limit 1e-15)",
                      in_range ? "ok" : "violated",
                      adjacency_exact ? "exact" : "off", err);
  return out;
}

Outcome check_gradients() {
  Outcome out;
  out.name = "recurrent-gradient-check";
  EmbeddingSeries inputs;
  inputs.dim = 4;
  Rng rng(640);
  for (int t = 0; t < 3; ++t) {
    DenseMatrix m(6, 4);
    for (double& x : m.flat()) x = rng.next_symmetric(1.0);
    inputs.snapshots.push_back(m);
  }
  const std::vector<LinkExample> batch{
      {0, 1, 1.0}, {2, 3, 0.0}, {4, 5, 1.0}, {0, 3, 0.0}, {1, 4, 1.0}};
  const double step = 1e-5;
  double worst = 0.0;
  for (CellKind kind : {CellKind::gru, CellKind::simple}) {
    ModelState model = ModelState::init(kind, 4, 4, 77);
    const BatchGradients analytic = batch_gradients(model, inputs, batch);
    auto tensors = model.parameter_tensors();
    for (std::size_t ti = 0; ti < tensors.size(); ++ti) {
      for (std::size_t j = 0; j < tensors[ti].size(); ++j) {
        const double saved = tensors[ti][j];
        tensors[ti][j] = saved + step;
        const double up = batch_loss(model, inputs, batch);
        tensors[ti][j] = saved - step;
        const double down = batch_loss(model, inputs, batch);
        tensors[ti][j] = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double analytic_g = analytic.tensors[ti][j];
        const double rel =
            std::abs(analytic_g - numeric) /
            std::max(1.0, std::abs(analytic_g) + std::abs(numeric));
        worst = std::max(worst, rel);
      }
    }
  }
  out.pass = worst < 1e-5;
  out.detail = format("gated and simple cells, 6 nodes / 3 steps / width 4: "
                      "max relative error %.2e (limit 1e-5)",
                      worst);
  return out;
}

Outcome check_adam_first_step() {
  Outcome out;
  out.name = "adam-first-step-closed-form";
  const std::vector<double> grads{1.0, 0.5, -2.0, 0.25};
  std::vector<double> params{0.0, 0.0, 0.0, 0.0};
  AdamState state = AdamState::init({params.size()});
  adam_step(state, {std::span<double>(params)},
            {std::span<const double>(grads)});

  bool exact = state.step == 1;
  const double bias1 = 1.0 - std::pow(state.config.beta1, 1.0);
  const double bias2 = 1.0 - std::pow(state.config.beta2, 1.0);
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double m_hat = state.first_moment[0][i] / bias1;
    const double v_hat = state.second_moment[0][i] / bias2;
    if (m_hat != grads[i]) exact = false;
    if (v_hat != grads[i] * grads[i]) exact = false;
  }
  out.pass = exact;
  out.detail = exact ? "corrected first moment = g and corrected second "
                       "moment = g^2, bitwise, for 4 gradients"
                     : "bias-corrected moments deviate from the closed form";
  return out;
}

Outcome check_metric_oracles() {
  Outcome out;
  out.name = "ranking-metric-oracles";
  Rng rng(4242);
  double worst_roc = 0.0, worst_ap = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.next_below(7);
    std::vector<ScoredPair> pairs(n);
    pairs[0].label = 1.0;
    pairs[1].label = 0.0;
    for (std::size_t i = 2; i < n; ++i) {
      pairs[i].label = rng.next_below(2) ? 1.0 : 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      pairs[i].src = static_cast<NodeId>(i);
      pairs[i].dst = static_cast<NodeId>(i + 1);
      pairs[i].score = 0.25 * static_cast<double>(rng.next_below(4));
    }

    // Pairwise-counting oracle.
    double wins = 0.0;
    std::size_t np = 0, nn = 0;
    for (const auto& p : pairs) {
      if (p.label == 1.0) {
        ++np;
        for (const auto& q : pairs) {
          if (q.label == 1.0) continue;
          if (p.score > q.score) wins += 1.0;
          else if (p.score == q.score) wins += 0.5;
        }
      } else {
        ++nn;
      }
    }
    const double roc_oracle =
        wins / (static_cast<double>(np) * static_cast<double>(nn));

    // Precision-scanning oracle.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return pairs[a].score > pairs[b].score;
                     });
    double hits = 0.0, ap_sum = 0.0;
    for (std::size_t rank = 0; rank < n; ++rank) {
      if (pairs[order[rank]].label == 1.0) {
        hits += 1.0;
        ap_sum += hits / static_cast<double>(rank + 1);
      }
    }
    const double ap_oracle = ap_sum / hits;

    worst_roc = std::max(worst_roc, std::abs(roc_auc(pairs) - roc_oracle));
    worst_ap = std::max(worst_ap, std::abs(pr_auc(pairs) - ap_oracle));
  }

  std::vector<ScoredPair> worked(4);
  const double labels[] = {1, 0, 1, 0};
  const double scores[] = {0.9, 0.8, 0.3, 0.1};
  for (std::size_t i = 0; i < 4; ++i) {
    worked[i] = {static_cast<NodeId>(i), static_cast<NodeId>(i + 1),
                 labels[i], scores[i]};
  }
  const double worked_roc = std::abs(roc_auc(worked) - 0.75);
  const double worked_ap = std::abs(pr_auc(worked) - 5.0 / 6.0);

  out.pass = worst_roc <= 1e-12 && worst_ap <= 1e-12 &&
             worked_roc <= 1e-12 && worked_ap <= 1e-12;
  out.detail = format("1000 tied instances: max |roc - oracle| = %.2e, "
                      "max |ap - oracle| = %.2e; worked examples off by "
                      "%.1e / %.1e",
                      worst_roc, worst_ap, worked_roc, worked_ap);
  return out;
}

struct FixtureRun {
  Outcome end_to_end;
  Outcome determinism;
};

FixtureRun check_fixture() {
  FixtureRun run;
  run.end_to_end.name = "synthetic-end-to-end";
  run.determinism.name = "pipeline-determinism";

  const fs::path dir = fs::temp_directory_path() / "tge_acceptance_fixture";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const TemporalGraph g = generate_synthetic({.num_nodes = 100,
                                              .num_snapshots = 10,
                                              .communities = 2,
                                              .p_in = 0.2,
                                              .p_out = 0.02,
                                              .seed = kFixtureGraphSeed});
  {
    std::ostringstream edges;
    write_edge_list(g, edges);
    write_text_file((dir / "edges.txt").string(), edges.str());
  }

  RunConfig cfg;
  cfg.edges_path = (dir / "edges.txt").string();
  cfg.out_dir = (dir / "out").string();
  cfg.granularity = "index";  // one cumulative snapshot per generator step
  cfg.dim = 64;               // the width must stay below the node count
  cfg.seed = kFixtureRunSeed;

  const auto t0 = Clock::now();
  const PipelineOutcome trained = run_pipeline(cfg);
  const double elapsed = seconds_since(t0);
  const double roc = trained.evaluate.report.roc_auc;

  const RunPaths paths = RunPaths::in(cfg.out_dir);
  const std::string report_first = read_text_file(paths.report);

  RunConfig random_cfg = cfg;
  random_cfg.scorer = "random";
  const double roc_random = run_evaluate(random_cfg).report.roc_auc;

  run.end_to_end.pass =
      roc >= 0.75 && std::abs(roc_random - 0.5) <= 0.05 && elapsed < 300.0;
  run.end_to_end.detail = format(
      "trained roc_auc = %.4f (need >= 0.75), random baseline = %.4f "
      "(need 0.5 +- 0.05), pipeline %.1f s (limit 300 s), %zu test pairs",
      roc, roc_random,
      elapsed, trained.evaluate.report.positives +
                   trained.evaluate.report.negatives);

  // A second full pipeline run with the same config must reproduce the
  // report byte for byte.
  run_pipeline(cfg);
  const std::string report_second = read_text_file(paths.report);
  run.determinism.pass = report_first == report_second;
  run.determinism.detail =
      run.determinism.pass
          ? format("two pipeline runs, %zu-byte reports identical",
                   report_first.size())
          : "reports differ between identical runs";
  return run;
}

Outcome guarded(Outcome (*fn)(), const char* name) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  std::vector<Outcome> results;
  results.push_back(guarded(check_givens_kernel, "givens-rotation-kernel"));
  results.push_back(guarded(check_qr, "householder-qr"));
  results.push_back(
      guarded(check_linear_collapse, "convolution-linearity-collapse"));
  results.push_back(guarded(check_influence, "influence-decay-matrix"));
  results.push_back(guarded(check_gradients, "recurrent-gradient-check"));
  results.push_back(
      guarded(check_adam_first_step, "adam-first-step-closed-form"));
  results.push_back(guarded(check_metric_oracles, "ranking-metric-oracles"));
  try {
    const FixtureRun fixture = check_fixture();
    results.push_back(fixture.end_to_end);
    results.push_back(fixture.determinism);
  } catch (const std::exception& e) {
    results.push_back(
        {"synthetic-end-to-end", false, std::string("exception: ") + e.what()});
    results.push_back({"pipeline-determinism", false, "fixture run aborted"});
  }

  std::size_t passed = 0;
  for (const Outcome& r : results) {
    std::printf("%s %s (%s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    if (r.pass) ++passed;
  }
  std::printf("%zu/%zu criteria passed\n", passed, results.size());
  return passed == results.size() ? 0 : 1;
}
