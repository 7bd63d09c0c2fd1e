#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace svpf {

// Parameters of the latent AR(1) volatility recurrence
//   Y_t = mu + phi * (Y_{t-1} - mu) + noise,  noise ~ N(0, tau^2).
struct SvParams {
  double mu = 0.0;
  double phi = 0.0;
  double tau = 0.0;
};

// Throws std::invalid_argument unless |phi| < 1 and tau >= 0 (and finite).
void validate_params(const SvParams& params);

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

// Long-run law of the latent state: N(mu, tau^2 / (1 - phi^2)).
Moments stationary_moments(const SvParams& params);

// How returns are produced from the latent state. Linear keeps the
// observation noise scale equal to |Y_t|, which is the model the filter's
// likelihood assumes; Squared uses Y_t^2 as the scale instead.
enum class Emission { Linear, Squared };

const char* emission_name(Emission emission);
Emission emission_from_name(const std::string& name);

struct VolPath {
  std::vector<double> states;
  std::vector<double> observations;
  std::uint64_t seed = 0;
};

// Draw order per path: one gaussian for Y_0 (stationary draw), then per
// step t >= 1 one gaussian for the state noise; every step (including
// t = 0) consumes one gaussian for the return noise, state first.
VolPath simulate_path(const SvParams& params, std::size_t steps, std::uint64_t seed,
                      Emission emission = Emission::Linear);

// Same recurrence with the initial state supplied by the caller (no
// stationary draw). Used by deterministic decay checks.
VolPath simulate_path_from(const SvParams& params, std::size_t steps, std::uint64_t seed,
                           double initial_state, Emission emission = Emission::Linear);

enum class Split { Train, Test, Eval };

const char* split_name(Split split);
Split split_from_name(const std::string& name);

struct Dataset {
  SvParams params;
  Emission emission = Emission::Linear;
  std::size_t path_length = 0;
  std::uint64_t master_seed = 0;
  std::vector<VolPath> paths;
  std::vector<Split> splits;  // one per path

  std::vector<std::size_t> indices_of(Split split) const;
};

// Paths get seeds derive_seed(seed, i), so path i is reproducible on its
// own. split_sizes = (train, test, eval) and must sum to num_paths.
Dataset generate_dataset(const SvParams& params, std::size_t num_paths, std::size_t path_length,
                         std::uint64_t seed, const std::array<std::size_t, 3>& split_sizes,
                         Emission emission = Emission::Linear);

// Dataset restricted to one split (keeps params/seed metadata).
Dataset filter_split(const Dataset& dataset, Split split);

// Nearest-rank percentile on sorted values: rank ceil(pct/100 * n) clamped
// to [1, n], 1-indexed. pct in [0, 100].
double nearest_rank_percentile(std::vector<double> values, double pct);

// Keeps paths whose per-path minimum state is <= the low_pct percentile of
// all per-path minima, or whose maximum is >= the high_pct percentile of
// all maxima (inclusive thresholds, union of the two selections).
Dataset build_outlier_subset(const Dataset& pool, double low_pct, double high_pct);

// dataset.csv (path_id,split,t,state,observation) + dataset.json sidecar.
void save_dataset(const Dataset& dataset, const std::string& dir);
Dataset load_dataset(const std::string& dir);

}  // namespace svpf
