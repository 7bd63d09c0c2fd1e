#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace svpf {

struct AdamState {
  std::vector<double> first_moment;
  std::vector<double> second_moment;
  std::uint64_t step_count = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

AdamState make_adam_state(std::size_t num_params, double lr = 1e-3);

// Bias-corrected Adam update, applied in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state);

// Pure-function form: returns the updated copies, inputs untouched.
std::pair<std::vector<double>, AdamState> opt_step(std::span<const double> params,
                                                   std::span<const double> grads,
                                                   const AdamState& state);

}  // namespace svpf
