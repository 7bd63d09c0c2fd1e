#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "core/bootstrap_pf.hpp"
#include "core/dense_net.hpp"
#include "core/rng.hpp"
#include "core/sv_model.hpp"

namespace svpf {

// Differentiable particle filter: learned transition (with the process
// noise as a second network input) and learned observation likelihood,
// soft resampling in between.
struct SvPfRnnModel {
  DenseNet trans_net;  // inputs [state, eps], eps ~ N(0,1)
  DenseNet obs_net;    // inputs [state, observation]
  double alpha = 0.5;  // soft-resampling trade-off in [0, 1]
  std::size_t num_particles = 128;
};

// Fresh model with the default [2, 32, 32, 1] architectures (tanh hidden;
// identity output for the transition, softplus for the likelihood).
SvPfRnnModel make_model(std::size_t num_particles, double alpha, std::uint64_t seed);

void validate_model(const SvPfRnnModel& model);

void save_model(const SvPfRnnModel& model, const std::string& path);
SvPfRnnModel load_model(const std::string& path);

// Element-wise transition: out[i] = trans_net(states[i], noise[i]).
void neural_transition(const SvPfRnnModel& model, std::span<const double> states,
                       std::span<const double> noise, std::span<double> out);

// Element-wise likelihood: out[i] = obs_net(states[i], obs), >= 0 by the
// softplus output layer.
void neural_observation(const SvPfRnnModel& model, std::span<const double> states, double obs,
                        std::span<double> out);

struct SoftResampleResult {
  ParticleEnsemble ensemble;  // gathered states, renormalized ratio weights
  std::vector<std::size_t> indices;
};

// Samples K indices i.i.d. from q = alpha*w + (1-alpha)/K and corrects the
// kept weights by w(k)/q(k) before renormalizing.
SoftResampleResult soft_resample(const ParticleEnsemble& ensemble, double alpha, Rng& rng);
SoftResampleResult soft_resample_with_uniforms(const ParticleEnsemble& ensemble, double alpha,
                                               std::span<double> uniforms);

// Everything one filter step produces, kept so the reverse pass can rerun
// the local computations without touching the RNG.
struct StepRecord {
  std::vector<double> noise;          // N(0,1) transition inputs
  std::vector<double> prop;           // transition outputs
  std::vector<double> like;           // observation outputs
  std::vector<double> norm_weights;   // after multiply + normalize
  std::vector<std::size_t> indices;   // soft-resampling choices
  std::vector<double> post_states;
  std::vector<double> post_weights;   // renormalized importance ratios
  double estimate = 0.0;
  bool degenerate = false;      // likelihood-weight underflow, reset to uniform
  bool ratio_fallback = false;  // importance ratios underflowed, reset to uniform
};

struct SequenceTape {
  std::vector<double> init_states;
  std::vector<StepRecord> steps;

  std::vector<double> estimates() const;
  std::size_t degeneracy_events() const;
};

// Full-sequence forward pass. Draw order per run: K gaussians for the
// initial ensemble, then per step K gaussians (transition noise) followed
// by K uniforms (resampling). k_override replaces model.num_particles.
SequenceTape forward_sequence_tape(const SvPfRnnModel& model, const VolPath& path,
                                   const Moments& init, std::uint64_t seed,
                                   std::size_t k_override = 0);

// Deterministic rerun against frozen randomness: initial states, noise and
// resampling indices come from `frozen`; everything else is recomputed
// from the current parameters. Used for finite-difference checks.
SequenceTape replay_sequence_tape(const SvPfRnnModel& model, const VolPath& path,
                                  const SequenceTape& frozen);

// Spec-facing view of a step.
struct TraceStep {
  ParticleEnsemble pre_resample;
  ParticleEnsemble post_resample;
  double estimate = 0.0;
  std::vector<double> noise_draws;
  std::vector<std::size_t> sampled_indices;
  bool degenerate = false;
};

struct SequenceResult {
  std::vector<double> initial_states;
  std::vector<double> estimates;
  std::vector<TraceStep> trace;  // empty unless recorded
  std::size_t degeneracy_events = 0;
};

SequenceResult forward_sequence(const SvPfRnnModel& model, const VolPath& path,
                                const Moments& init, std::uint64_t seed, bool record = false);

// Gradient seeds for the reverse pass; any part may be left empty.
struct SequenceGrads {
  std::vector<double> d_estimates;                  // length T
  std::vector<std::vector<double>> d_post_states;   // T x K
  std::vector<double> d_final_weights;              // K, applied at t = T-1
};

// Reverse-mode pass over the tape, accumulating into the two parameter
// gradient buffers. Gradients never flow through the index choices; they
// do flow through the importance-ratio weights. `window` > 0 cuts the
// state/weight adjoints every `window` steps (truncated BPTT).
void sequence_backward(const SvPfRnnModel& model, const VolPath& path, const SequenceTape& tape,
                       const SequenceGrads& grads, std::size_t window,
                       std::span<double> trans_grad, std::span<double> obs_grad);

// Filter driven by arbitrary scalar functions instead of networks; same
// stepping, sampling and estimate rules as the neural path.
struct FilterFunctions {
  std::function<double(double state, double eps)> transition;
  std::function<double(double state, double obs)> observation;
};

SequenceResult forward_sequence_fns(const FilterFunctions& fns, std::size_t num_particles,
                                    double alpha, const VolPath& path, const Moments& init,
                                    std::uint64_t seed, bool record = false);

// Trace dump for particle-cloud plots: per step one row per particle.
void save_trace(const SequenceResult& result, const VolPath& path, const std::string& dir);

}  // namespace svpf
