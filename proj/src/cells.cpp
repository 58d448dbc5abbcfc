#include "tge/cells.hpp"

#include <cmath>
#include <cstddef>

#include "tge/errors.hpp"
#include "tge/rng.hpp"

namespace tge {
namespace {

// m(i, j) += scale[i] * row[j]
void outer_accumulate(DenseMatrix& m, std::span<const double> scale,
                      std::span<const double> row) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double s = scale[i];
    if (s == 0.0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += s * row[j];
  }
}

void add_into(std::span<double> dst, std::span<const double> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void check_cache(std::uint64_t cache_rev, std::uint64_t param_rev) {
  if (cache_rev != param_rev) {
    throw_numeric("backward pass given a cache recorded before the last "
                  "parameter update; rerun the forward pass");
  }
}

std::vector<double> gate_preact(const DenseMatrix& w, std::span<const double> x,
                                const DenseMatrix& u, std::span<const double> h,
                                const std::vector<double>& bias) {
  std::vector<double> a = matvec(w, x);
  const std::vector<double> rec = matvec(u, h);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += rec[i] + bias[i];
  return a;
}

}  // namespace

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

GruParams GruParams::init(std::size_t input_dim, std::size_t hidden_dim,
                          std::uint64_t seed) {
  if (input_dim == 0 || hidden_dim == 0) {
    throw_data("recurrent cell needs positive input and hidden sizes");
  }
  GruParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.w_update = glorot_init(hidden_dim, input_dim, derive_seed(seed, 0));
  p.u_update = glorot_init(hidden_dim, hidden_dim, derive_seed(seed, 1));
  p.w_reset = glorot_init(hidden_dim, input_dim, derive_seed(seed, 2));
  p.u_reset = glorot_init(hidden_dim, hidden_dim, derive_seed(seed, 3));
  p.w_cand = glorot_init(hidden_dim, input_dim, derive_seed(seed, 4));
  p.u_cand = glorot_init(hidden_dim, hidden_dim, derive_seed(seed, 5));
  p.b_update.assign(hidden_dim, 0.0);
  p.b_reset.assign(hidden_dim, 0.0);
  p.b_cand.assign(hidden_dim, 0.0);
  return p;
}

std::vector<std::span<double>> GruParams::tensors() {
  return {w_update.flat(), u_update.flat(), w_reset.flat(),
          u_reset.flat(),  w_cand.flat(),   u_cand.flat(),
          b_update,        b_reset,         b_cand};
}

std::vector<std::span<const double>> GruParams::tensors() const {
  return {w_update.flat(), u_update.flat(), w_reset.flat(),
          u_reset.flat(),  w_cand.flat(),   u_cand.flat(),
          b_update,        b_reset,         b_cand};
}

GruGrads GruGrads::zeros_like(const GruParams& p) {
  GruGrads g;
  g.w_update = DenseMatrix(p.hidden_dim, p.input_dim);
  g.u_update = DenseMatrix(p.hidden_dim, p.hidden_dim);
  g.w_reset = DenseMatrix(p.hidden_dim, p.input_dim);
  g.u_reset = DenseMatrix(p.hidden_dim, p.hidden_dim);
  g.w_cand = DenseMatrix(p.hidden_dim, p.input_dim);
  g.u_cand = DenseMatrix(p.hidden_dim, p.hidden_dim);
  g.b_update.assign(p.hidden_dim, 0.0);
  g.b_reset.assign(p.hidden_dim, 0.0);
  g.b_cand.assign(p.hidden_dim, 0.0);
  return g;
}

std::vector<std::span<const double>> GruGrads::tensors() const {
  return {w_update.flat(), u_update.flat(), w_reset.flat(),
          u_reset.flat(),  w_cand.flat(),   u_cand.flat(),
          b_update,        b_reset,         b_cand};
}

GruCache gru_forward(const GruParams& params, const DenseMatrix& inputs) {
  if (inputs.cols() != params.input_dim) {
    throw_data("sequence width " + std::to_string(inputs.cols()) +
               " does not match cell input size " +
               std::to_string(params.input_dim));
  }
  const std::size_t steps = inputs.rows();
  const std::size_t h = params.hidden_dim;

  GruCache cache;
  cache.params_revision = params.revision;
  cache.inputs = inputs;
  cache.hidden.reserve(steps + 1);
  cache.hidden.emplace_back(h, 0.0);
  cache.update_gate.reserve(steps);
  cache.reset_gate.reserve(steps);
  cache.candidate.reserve(steps);

  for (std::size_t t = 0; t < steps; ++t) {
    const std::span<const double> x = inputs.row(t);
    const std::vector<double>& prev = cache.hidden.back();

    std::vector<double> z =
        gate_preact(params.w_update, x, params.u_update, prev, params.b_update);
    std::vector<double> r =
        gate_preact(params.w_reset, x, params.u_reset, prev, params.b_reset);
    for (std::size_t i = 0; i < h; ++i) {
      z[i] = sigmoid(z[i]);
      r[i] = sigmoid(r[i]);
    }

    std::vector<double> gated(h);
    for (std::size_t i = 0; i < h; ++i) gated[i] = r[i] * prev[i];
    std::vector<double> c =
        gate_preact(params.w_cand, x, params.u_cand, gated, params.b_cand);
    for (std::size_t i = 0; i < h; ++i) c[i] = std::tanh(c[i]);

    std::vector<double> next(h);
    for (std::size_t i = 0; i < h; ++i) {
      next[i] = (1.0 - z[i]) * prev[i] + z[i] * c[i];
    }

    cache.update_gate.push_back(std::move(z));
    cache.reset_gate.push_back(std::move(r));
    cache.candidate.push_back(std::move(c));
    cache.hidden.push_back(std::move(next));
  }
  return cache;
}

void gru_backward(const GruParams& params, const GruCache& cache,
                  std::span<const double> d_final, GruGrads& grads) {
  check_cache(cache.params_revision, params.revision);
  const std::size_t h = params.hidden_dim;
  if (d_final.size() != h) {
    throw_data("gradient size does not match hidden size");
  }

  std::vector<double> dh(d_final.begin(), d_final.end());
  const std::size_t steps = cache.inputs.rows();
  for (std::size_t step = steps; step-- > 0;) {
    const std::span<const double> x = cache.inputs.row(step);
    const std::vector<double>& prev = cache.hidden[step];
    const std::vector<double>& z = cache.update_gate[step];
    const std::vector<double>& r = cache.reset_gate[step];
    const std::vector<double>& c = cache.candidate[step];

    std::vector<double> d_preact_z(h), d_preact_c(h), dh_prev(h);
    for (std::size_t i = 0; i < h; ++i) {
      const double dz = dh[i] * (c[i] - prev[i]);
      d_preact_z[i] = dz * z[i] * (1.0 - z[i]);
      const double dc = dh[i] * z[i];
      d_preact_c[i] = dc * (1.0 - c[i] * c[i]);
      dh_prev[i] = dh[i] * (1.0 - z[i]);
    }

    std::vector<double> gated(h);
    for (std::size_t i = 0; i < h; ++i) gated[i] = r[i] * prev[i];
    outer_accumulate(grads.w_cand, d_preact_c, x);
    outer_accumulate(grads.u_cand, d_preact_c, gated);
    add_into(grads.b_cand, d_preact_c);

    const std::vector<double> d_gated =
        matvec_transposed(params.u_cand, d_preact_c);
    std::vector<double> d_preact_r(h);
    for (std::size_t i = 0; i < h; ++i) {
      dh_prev[i] += d_gated[i] * r[i];
      const double dr = d_gated[i] * prev[i];
      d_preact_r[i] = dr * r[i] * (1.0 - r[i]);
    }

    outer_accumulate(grads.w_update, d_preact_z, x);
    outer_accumulate(grads.u_update, d_preact_z, prev);
    add_into(grads.b_update, d_preact_z);
    outer_accumulate(grads.w_reset, d_preact_r, x);
    outer_accumulate(grads.u_reset, d_preact_r, prev);
    add_into(grads.b_reset, d_preact_r);

    add_into(dh_prev, matvec_transposed(params.u_update, d_preact_z));
    add_into(dh_prev, matvec_transposed(params.u_reset, d_preact_r));
    dh = std::move(dh_prev);
  }
}

SimpleCellParams SimpleCellParams::init(std::size_t input_dim,
                                        std::size_t hidden_dim,
                                        std::uint64_t seed) {
  if (input_dim == 0 || hidden_dim == 0) {
    throw_data("recurrent cell needs positive input and hidden sizes");
  }
  SimpleCellParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.recurrent = glorot_init(hidden_dim, hidden_dim, derive_seed(seed, 0));
  p.input = glorot_init(hidden_dim, input_dim, derive_seed(seed, 1));
  return p;
}

std::vector<std::span<double>> SimpleCellParams::tensors() {
  return {recurrent.flat(), input.flat()};
}

std::vector<std::span<const double>> SimpleCellParams::tensors() const {
  return {recurrent.flat(), input.flat()};
}

SimpleCellGrads SimpleCellGrads::zeros_like(const SimpleCellParams& p) {
  SimpleCellGrads g;
  g.recurrent = DenseMatrix(p.hidden_dim, p.hidden_dim);
  g.input = DenseMatrix(p.hidden_dim, p.input_dim);
  return g;
}

std::vector<std::span<const double>> SimpleCellGrads::tensors() const {
  return {recurrent.flat(), input.flat()};
}

SimpleCellCache simple_forward(const SimpleCellParams& params,
                               const DenseMatrix& inputs) {
  if (inputs.cols() != params.input_dim) {
    throw_data("sequence width " + std::to_string(inputs.cols()) +
               " does not match cell input size " +
               std::to_string(params.input_dim));
  }
  const std::size_t h = params.hidden_dim;
  SimpleCellCache cache;
  cache.params_revision = params.revision;
  cache.inputs = inputs;
  cache.hidden.reserve(inputs.rows() + 1);
  cache.hidden.emplace_back(h, 0.0);
  for (std::size_t t = 0; t < inputs.rows(); ++t) {
    std::vector<double> a = matvec(params.recurrent, cache.hidden.back());
    const std::vector<double> drive = matvec(params.input, inputs.row(t));
    for (std::size_t i = 0; i < h; ++i) a[i] = std::tanh(a[i] + drive[i]);
    cache.hidden.push_back(std::move(a));
  }
  return cache;
}

void simple_backward(const SimpleCellParams& params,
                     const SimpleCellCache& cache,
                     std::span<const double> d_final, SimpleCellGrads& grads) {
  check_cache(cache.params_revision, params.revision);
  const std::size_t h = params.hidden_dim;
  if (d_final.size() != h) {
    throw_data("gradient size does not match hidden size");
  }
  std::vector<double> dh(d_final.begin(), d_final.end());
  for (std::size_t step = cache.inputs.rows(); step-- > 0;) {
    const std::vector<double>& now = cache.hidden[step + 1];
    const std::vector<double>& prev = cache.hidden[step];
    std::vector<double> d_preact(h);
    for (std::size_t i = 0; i < h; ++i) {
      d_preact[i] = dh[i] * (1.0 - now[i] * now[i]);
    }
    outer_accumulate(grads.recurrent, d_preact, prev);
    outer_accumulate(grads.input, d_preact, cache.inputs.row(step));
    dh = matvec_transposed(params.recurrent, d_preact);
  }
}

}  // namespace tge
