#include "core/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace svpf {

AdamState make_adam_state(std::size_t num_params, double lr) {
  AdamState state;
  state.first_moment.assign(num_params, 0.0);
  state.second_moment.assign(num_params, 0.0);
  state.lr = lr;
  return state;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state) {
  const std::size_t n = params.size();
  if (grads.size() != n || state.first_moment.size() != n || state.second_moment.size() != n)
    throw std::invalid_argument("adam_step length mismatch");
  ++state.step_count;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  for (std::size_t i = 0; i < n; ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * grads[i];
    v = state.beta2 * v + (1.0 - state.beta2) * grads[i] * grads[i];
    const double m_hat = m / bc1;
    const double v_hat = v / bc2;
    params[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

std::pair<std::vector<double>, AdamState> opt_step(std::span<const double> params,
                                                   std::span<const double> grads,
                                                   const AdamState& state) {
  std::vector<double> new_params(params.begin(), params.end());
  AdamState new_state = state;
  adam_step(new_params, grads, new_state);
  return {std::move(new_params), std::move(new_state)};
}

}  // namespace svpf
