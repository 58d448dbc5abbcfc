#include "tge/adam.hpp"

#include <cmath>
#include <string>

#include "tge/errors.hpp"

namespace tge {

AdamState AdamState::init(const std::vector<std::size_t>& tensor_sizes,
                          const AdamConfig& config) {
  if (config.learning_rate <= 0.0) throw_data("learning rate must be > 0");
  if (config.beta1 < 0.0 || config.beta1 >= 1.0 || config.beta2 < 0.0 ||
      config.beta2 >= 1.0) {
    throw_data("moment decay rates must lie in [0, 1)");
  }
  if (config.epsilon <= 0.0) throw_data("epsilon must be > 0");
  AdamState state;
  state.config = config;
  state.first_moment.reserve(tensor_sizes.size());
  state.second_moment.reserve(tensor_sizes.size());
  for (std::size_t n : tensor_sizes) {
    state.first_moment.emplace_back(n, 0.0);
    state.second_moment.emplace_back(n, 0.0);
  }
  return state;
}

void adam_step(AdamState& state, const std::vector<std::span<double>>& params,
               const std::vector<std::span<const double>>& grads) {
  if (params.size() != state.first_moment.size() ||
      grads.size() != state.first_moment.size()) {
    throw_data("optimizer was initialised for " +
               std::to_string(state.first_moment.size()) +
               " tensors, got " + std::to_string(params.size()) +
               " parameters / " + std::to_string(grads.size()) + " gradients");
  }
  const AdamConfig& c = state.config;
  ++state.step;
  const double bias1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));

  for (std::size_t k = 0; k < params.size(); ++k) {
    std::vector<double>& m = state.first_moment[k];
    std::vector<double>& v = state.second_moment[k];
    const std::span<double> p = params[k];
    const std::span<const double> g = grads[k];
    if (p.size() != m.size() || g.size() != m.size()) {
      throw_data("tensor " + std::to_string(k) + " changed size since the "
                 "optimizer was initialised");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      p[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
    }
  }
}

}  // namespace tge
