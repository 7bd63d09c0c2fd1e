#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/sv_model.hpp"

namespace svpf {

// Scale floor used when evaluating the observation density at states near
// zero, where the exact formula is singular.
inline constexpr double kSigmaFloor = 1e-6;

struct ParticleEnsemble {
  std::vector<double> states;
  std::vector<double> weights;
};

// Uniform-weight ensemble drawn from the stationary law of the state.
ParticleEnsemble init_ensemble(const SvParams& params, std::size_t num_particles, Rng& rng);

// mu + phi * (state - mu) + noise; the caller draws noise ~ N(0, tau).
double pf_transition(double state, double noise, const SvParams& params);

// Gaussian density of obs with mean 0 and scale max(|state|, kSigmaFloor).
double pf_obs_likelihood(double state, double obs);

// Weighted mean of the ensemble.
double pf_estimate(const ParticleEnsemble& ensemble);

// Draws count indices i.i.d. from the discrete distribution `weights` by
// inverse CDF over a sorted batch of the supplied uniforms.
std::vector<std::size_t> multinomial_indices(std::span<const double> weights,
                                             std::span<double> uniforms);

// One propagate / reweight / normalize / resample step with all random
// draws supplied by the caller: `noise` holds one N(0, tau) draw per
// particle, `uniforms` one U[0,1) draw per particle. Returns true when the
// weights underflowed and were reset to uniform.
bool sir_step_with_draws(ParticleEnsemble& ensemble, double obs, const SvParams& params,
                         std::span<const double> noise, std::span<double> uniforms);

// Same step drawing its own randomness: per particle one gaussian for the
// transition, then one uniform for the resampler.
bool sir_step(ParticleEnsemble& ensemble, double obs, const SvParams& params, Rng& rng);

struct FilterOutput {
  std::vector<double> estimates;
  std::vector<ParticleEnsemble> ensembles;  // filled only when recording
  std::size_t degeneracy_events = 0;
};

FilterOutput run_filter(const VolPath& path, std::size_t num_particles, const SvParams& params,
                        std::uint64_t seed, bool record = false);

// filter.csv (t,estimate,truth) plus particles_t.csv when recorded.
void save_filter_output(const FilterOutput& output, const VolPath& path, const std::string& dir);

}  // namespace svpf
