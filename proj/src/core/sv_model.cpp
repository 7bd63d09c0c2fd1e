#include "core/sv_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "core/io_util.hpp"
#include "json.hpp"

namespace svpf {

void validate_params(const SvParams& params) {
  if (!std::isfinite(params.mu) || !std::isfinite(params.phi) || !std::isfinite(params.tau))
    throw std::invalid_argument("SvParams must be finite");
  if (std::abs(params.phi) >= 1.0)
    throw std::invalid_argument("SvParams requires |phi| < 1");
  if (params.tau < 0.0) throw std::invalid_argument("SvParams requires tau >= 0");
}

Moments stationary_moments(const SvParams& params) {
  validate_params(params);
  return {params.mu, params.tau / std::sqrt(1.0 - params.phi * params.phi)};
}

const char* emission_name(Emission emission) {
  return emission == Emission::Linear ? "linear" : "squared";
}

Emission emission_from_name(const std::string& name) {
  if (name == "linear") return Emission::Linear;
  if (name == "squared") return Emission::Squared;
  throw std::invalid_argument("unknown emission: " + name);
}

const char* split_name(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Test: return "test";
    default: return "eval";
  }
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::Train;
  if (name == "test") return Split::Test;
  if (name == "eval") return Split::Eval;
  throw std::invalid_argument("unknown split: " + name);
}

namespace {

double emit(double state, double noise, Emission emission) {
  return emission == Emission::Linear ? state * noise : state * state * noise;
}

VolPath run_recurrence(const SvParams& params, std::size_t steps, std::uint64_t seed, Rng& rng,
                       double initial_state, Emission emission) {
  VolPath path;
  path.seed = seed;
  path.states.resize(steps);
  path.observations.resize(steps);
  double state = initial_state;
  for (std::size_t t = 0; t < steps; ++t) {
    if (t > 0) state = params.mu + params.phi * (state - params.mu) + params.tau * rng.gaussian();
    path.states[t] = state;
    path.observations[t] = emit(state, rng.gaussian(), emission);
  }
  return path;
}

}  // namespace

VolPath simulate_path(const SvParams& params, std::size_t steps, std::uint64_t seed,
                      Emission emission) {
  validate_params(params);
  if (steps < 1) throw std::invalid_argument("simulate_path requires steps >= 1");
  Rng rng(seed);
  const Moments m = stationary_moments(params);
  const double y0 = m.mean + m.stddev * rng.gaussian();
  return run_recurrence(params, steps, seed, rng, y0, emission);
}

VolPath simulate_path_from(const SvParams& params, std::size_t steps, std::uint64_t seed,
                           double initial_state, Emission emission) {
  validate_params(params);
  if (steps < 1) throw std::invalid_argument("simulate_path requires steps >= 1");
  Rng rng(seed);
  return run_recurrence(params, steps, seed, rng, initial_state, emission);
}

std::vector<std::size_t> Dataset::indices_of(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < splits.size(); ++i)
    if (splits[i] == split) out.push_back(i);
  return out;
}

Dataset generate_dataset(const SvParams& params, std::size_t num_paths, std::size_t path_length,
                         std::uint64_t seed, const std::array<std::size_t, 3>& split_sizes,
                         Emission emission) {
  validate_params(params);
  if (split_sizes[0] + split_sizes[1] + split_sizes[2] != num_paths)
    throw std::invalid_argument("split sizes must sum to the number of paths");
  Dataset ds;
  ds.params = params;
  ds.emission = emission;
  ds.path_length = path_length;
  ds.master_seed = seed;
  ds.paths.reserve(num_paths);
  ds.splits.reserve(num_paths);
  for (std::size_t i = 0; i < num_paths; ++i) {
    ds.paths.push_back(simulate_path(params, path_length, derive_seed(seed, i), emission));
    Split s = Split::Eval;
    if (i < split_sizes[0])
      s = Split::Train;
    else if (i < split_sizes[0] + split_sizes[1])
      s = Split::Test;
    ds.splits.push_back(s);
  }
  return ds;
}

Dataset filter_split(const Dataset& dataset, Split split) {
  Dataset out;
  out.params = dataset.params;
  out.emission = dataset.emission;
  out.path_length = dataset.path_length;
  out.master_seed = dataset.master_seed;
  for (std::size_t i = 0; i < dataset.paths.size(); ++i) {
    if (dataset.splits[i] == split) {
      out.paths.push_back(dataset.paths[i]);
      out.splits.push_back(split);
    }
  }
  return out;
}

double nearest_rank_percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw std::invalid_argument("percentile of empty set");
  if (!(pct >= 0.0 && pct <= 100.0)) throw std::invalid_argument("percentile must be in [0, 100]");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return values[rank - 1];
}

Dataset build_outlier_subset(const Dataset& pool, double low_pct, double high_pct) {
  if (pool.paths.empty()) throw std::invalid_argument("outlier subset of an empty pool");
  if (!(low_pct >= 0.0 && high_pct <= 100.0 && low_pct <= high_pct))
    throw std::invalid_argument("require 0 <= low_pct <= high_pct <= 100");
  std::vector<double> minima(pool.paths.size()), maxima(pool.paths.size());
  for (std::size_t i = 0; i < pool.paths.size(); ++i) {
    const auto& s = pool.paths[i].states;
    minima[i] = *std::min_element(s.begin(), s.end());
    maxima[i] = *std::max_element(s.begin(), s.end());
  }
  const double low_threshold = nearest_rank_percentile(minima, low_pct);
  const double high_threshold = nearest_rank_percentile(maxima, high_pct);

  Dataset out;
  out.params = pool.params;
  out.emission = pool.emission;
  out.path_length = pool.path_length;
  out.master_seed = pool.master_seed;
  for (std::size_t i = 0; i < pool.paths.size(); ++i) {
    if (minima[i] <= low_threshold || maxima[i] >= high_threshold) {
      out.paths.push_back(pool.paths[i]);
      out.splits.push_back(pool.splits[i]);
    }
  }
  return out;
}

void save_dataset(const Dataset& dataset, const std::string& dir) {
  ensure_directory(dir);
  std::ostringstream csv;
  csv << "path_id,split,t,state,observation\n";
  for (std::size_t i = 0; i < dataset.paths.size(); ++i) {
    const auto& p = dataset.paths[i];
    const char* split = split_name(dataset.splits[i]);
    for (std::size_t t = 0; t < p.states.size(); ++t) {
      csv << i << ',' << split << ',' << t << ',' << format_real(p.states[t]) << ','
          << format_real(p.observations[t]) << '\n';
    }
  }
  write_text_file(dir + "/dataset.csv", csv.str());

  nlohmann::ordered_json meta;
  meta["mu"] = dataset.params.mu;
  meta["phi"] = dataset.params.phi;
  meta["tau"] = dataset.params.tau;
  meta["T"] = dataset.path_length;
  meta["K"] = dataset.paths.size();
  meta["seed"] = dataset.master_seed;
  meta["emission"] = emission_name(dataset.emission);
  write_text_file(dir + "/dataset.json", meta.dump(2) + "\n");
}

Dataset load_dataset(const std::string& dir) {
  const auto meta = nlohmann::json::parse(read_text_file(dir + "/dataset.json"));
  Dataset ds;
  ds.params.mu = meta.at("mu").get<double>();
  ds.params.phi = meta.at("phi").get<double>();
  ds.params.tau = meta.at("tau").get<double>();
  ds.path_length = meta.at("T").get<std::size_t>();
  ds.master_seed = meta.at("seed").get<std::uint64_t>();
  ds.emission = emission_from_name(meta.at("emission").get<std::string>());
  const std::size_t num_paths = meta.at("K").get<std::size_t>();
  ds.paths.resize(num_paths);
  ds.splits.resize(num_paths, Split::Train);
  for (auto& p : ds.paths) {
    p.states.resize(ds.path_length);
    p.observations.resize(ds.path_length);
  }

  std::istringstream in(read_text_file(dir + "/dataset.csv"));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw std::runtime_error("malformed dataset row: " + line);
    const std::size_t id = std::stoull(f[0]);
    const std::size_t t = std::stoull(f[2]);
    if (id >= num_paths || t >= ds.path_length) throw std::runtime_error("dataset row out of range");
    ds.splits[id] = split_from_name(f[1]);
    ds.paths[id].states[t] = std::stod(f[3]);
    ds.paths[id].observations[t] = std::stod(f[4]);
    ds.paths[id].seed = derive_seed(ds.master_seed, id);
  }
  return ds;
}

}  // namespace svpf
