#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tge {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second moment accumulators for a fixed list of parameter tensors.
struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;

  static AdamState init(const std::vector<std::size_t>& tensor_sizes,
                        const AdamConfig& config = {});
};

// One update: advances the step counter, refreshes both moment estimates,
// applies bias correction, and writes the new parameter values in place.
void adam_step(AdamState& state, const std::vector<std::span<double>>& params,
               const std::vector<std::span<const double>>& grads);

}  // namespace tge
