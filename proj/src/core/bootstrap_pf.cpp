#include "core/bootstrap_pf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "core/io_util.hpp"

namespace svpf {

namespace {
constexpr double kInvSqrtTwoPi = 0.39894228040143267794;
}

ParticleEnsemble init_ensemble(const SvParams& params, std::size_t num_particles, Rng& rng) {
  if (num_particles < 1) throw std::invalid_argument("need at least one particle");
  const Moments m = stationary_moments(params);
  ParticleEnsemble ensemble;
  ensemble.states.resize(num_particles);
  ensemble.weights.assign(num_particles, 1.0 / static_cast<double>(num_particles));
  for (auto& s : ensemble.states) s = m.mean + m.stddev * rng.gaussian();
  return ensemble;
}

double pf_transition(double state, double noise, const SvParams& params) {
  return params.mu + params.phi * (state - params.mu) + noise;
}

double pf_obs_likelihood(double state, double obs) {
  const double sigma = std::max(std::abs(state), kSigmaFloor);
  const double z = obs / sigma;
  return kInvSqrtTwoPi / sigma * std::exp(-0.5 * z * z);
}

double pf_estimate(const ParticleEnsemble& ensemble) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ensemble.states.size(); ++i)
    acc += ensemble.states[i] * ensemble.weights[i];
  return acc;
}

std::vector<std::size_t> multinomial_indices(std::span<const double> weights,
                                             std::span<double> uniforms) {
  std::sort(uniforms.begin(), uniforms.end());
  std::vector<std::size_t> indices(uniforms.size());
  std::size_t src = 0;
  double cumulative = weights.empty() ? 0.0 : weights[0];
  for (std::size_t j = 0; j < uniforms.size(); ++j) {
    while (uniforms[j] >= cumulative && src + 1 < weights.size()) {
      ++src;
      cumulative += weights[src];
    }
    indices[j] = src;
  }
  return indices;
}

bool sir_step_with_draws(ParticleEnsemble& ensemble, double obs, const SvParams& params,
                         std::span<const double> noise, std::span<double> uniforms) {
  const std::size_t k = ensemble.states.size();
  if (ensemble.weights.size() != k || noise.size() != k || uniforms.size() != k)
    throw std::invalid_argument("sir_step size mismatch");

  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    ensemble.states[i] = pf_transition(ensemble.states[i], noise[i], params);
    ensemble.weights[i] *= pf_obs_likelihood(ensemble.states[i], obs);
    sum += ensemble.weights[i];
  }

  bool degenerate = false;
  if (sum > 0.0 && std::isfinite(sum)) {
    for (auto& w : ensemble.weights) w /= sum;
  } else {
    degenerate = true;
    std::fill(ensemble.weights.begin(), ensemble.weights.end(), 1.0 / static_cast<double>(k));
  }

  const auto indices = multinomial_indices(ensemble.weights, uniforms);
  std::vector<double> resampled(k);
  for (std::size_t j = 0; j < k; ++j) resampled[j] = ensemble.states[indices[j]];
  ensemble.states = std::move(resampled);
  std::fill(ensemble.weights.begin(), ensemble.weights.end(), 1.0 / static_cast<double>(k));
  return degenerate;
}

bool sir_step(ParticleEnsemble& ensemble, double obs, const SvParams& params, Rng& rng) {
  const std::size_t k = ensemble.states.size();
  std::vector<double> noise(k), uniforms(k);
  for (auto& n : noise) n = params.tau * rng.gaussian();
  for (auto& u : uniforms) u = rng.uniform();
  return sir_step_with_draws(ensemble, obs, params, noise, uniforms);
}

FilterOutput run_filter(const VolPath& path, std::size_t num_particles, const SvParams& params,
                        std::uint64_t seed, bool record) {
  validate_params(params);
  Rng rng(seed);
  ParticleEnsemble ensemble = init_ensemble(params, num_particles, rng);
  FilterOutput out;
  out.estimates.reserve(path.observations.size());
  for (double obs : path.observations) {
    if (sir_step(ensemble, obs, params, rng)) ++out.degeneracy_events;
    out.estimates.push_back(pf_estimate(ensemble));
    if (record) out.ensembles.push_back(ensemble);
  }
  return out;
}

void save_filter_output(const FilterOutput& output, const VolPath& path, const std::string& dir) {
  ensure_directory(dir);
  std::ostringstream csv;
  csv << "t,estimate,truth\n";
  for (std::size_t t = 0; t < output.estimates.size(); ++t)
    csv << t << ',' << format_real(output.estimates[t]) << ',' << format_real(path.states[t])
        << '\n';
  write_text_file(dir + "/filter.csv", csv.str());

  if (!output.ensembles.empty()) {
    std::ostringstream pcsv;
    pcsv << "t,particle,state,weight\n";
    for (std::size_t t = 0; t < output.ensembles.size(); ++t) {
      const auto& e = output.ensembles[t];
      for (std::size_t i = 0; i < e.states.size(); ++i)
        pcsv << t << ',' << i << ',' << format_real(e.states[i]) << ','
             << format_real(e.weights[i]) << '\n';
    }
    write_text_file(dir + "/particles_t.csv", pcsv.str());
  }
}

}  // namespace svpf
