#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tge/matrix.hpp"

namespace tge {

// Gated recurrent unit with update/reset gates and a tanh candidate:
//   z_t = sigmoid(Wz x_t + Uz h_{t-1} + bz)
//   r_t = sigmoid(Wr x_t + Ur h_{t-1} + br)
//   c_t = tanh(Wc x_t + Uc (r_t . h_{t-1}) + bc)
//   h_t = (1 - z_t) . h_{t-1} + z_t . c_t          with h_0 = 0
struct GruParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  DenseMatrix w_update, u_update;
  DenseMatrix w_reset, u_reset;
  DenseMatrix w_cand, u_cand;
  std::vector<double> b_update, b_reset, b_cand;
  std::uint64_t revision = 0;

  static GruParams init(std::size_t input_dim, std::size_t hidden_dim,
                        std::uint64_t seed);

  // Parameter tensors in a fixed order, shared with GruGrads.
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;

  // Marks the parameters as modified; outstanding caches become stale.
  void touch() { ++revision; }
};

struct GruGrads {
  DenseMatrix w_update, u_update;
  DenseMatrix w_reset, u_reset;
  DenseMatrix w_cand, u_cand;
  std::vector<double> b_update, b_reset, b_cand;

  static GruGrads zeros_like(const GruParams& p);
  std::vector<std::span<const double>> tensors() const;
};

struct GruCache {
  std::uint64_t params_revision = 0;
  DenseMatrix inputs;                   // T x d
  std::vector<std::vector<double>> hidden;  // T+1 entries, hidden[0] = 0
  std::vector<std::vector<double>> update_gate, reset_gate, candidate;

  std::span<const double> final_hidden() const { return hidden.back(); }
};

// Runs the recurrence over a T x d input sequence and keeps everything
// the backward pass needs.
GruCache gru_forward(const GruParams& params, const DenseMatrix& inputs);

// Backpropagation through time from d(final hidden). Accumulates into
// `grads`. Rejects caches taken before the last parameter update.
void gru_backward(const GruParams& params, const GruCache& cache,
                  std::span<const double> d_final, GruGrads& grads);

// Minimal recurrent cell: h_t = tanh(A h_{t-1} + B x_t), h_0 = 0.
struct SimpleCellParams {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  DenseMatrix recurrent;  // h x h
  DenseMatrix input;      // h x d
  std::uint64_t revision = 0;

  static SimpleCellParams init(std::size_t input_dim, std::size_t hidden_dim,
                               std::uint64_t seed);
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  void touch() { ++revision; }
};

struct SimpleCellGrads {
  DenseMatrix recurrent;
  DenseMatrix input;

  static SimpleCellGrads zeros_like(const SimpleCellParams& p);
  std::vector<std::span<const double>> tensors() const;
};

struct SimpleCellCache {
  std::uint64_t params_revision = 0;
  DenseMatrix inputs;
  std::vector<std::vector<double>> hidden;  // T+1 entries, hidden[0] = 0

  std::span<const double> final_hidden() const { return hidden.back(); }
};

SimpleCellCache simple_forward(const SimpleCellParams& params,
                               const DenseMatrix& inputs);

void simple_backward(const SimpleCellParams& params,
                     const SimpleCellCache& cache,
                     std::span<const double> d_final, SimpleCellGrads& grads);

double sigmoid(double x);

}  // namespace tge
