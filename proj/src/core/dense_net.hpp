#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace svpf {

enum class Activation { Tanh, Relu, Softplus, Identity };

const char* activation_name(Activation activation);
Activation activation_from_name(const std::string& name);

// Small fully-connected network on a flat parameter vector. Layout per
// layer: the weight matrix row-major by output unit (out x in), then the
// biases. Layers are stored in order, so parameters ==
// [W0, b0, W1, b1, ...].
struct DenseNet {
  std::vector<std::size_t> layer_sizes;
  std::vector<Activation> activations;  // one per layer transition
  std::vector<double> parameters;
  std::uint64_t seed = 0;

  std::size_t num_layers() const { return activations.size(); }
  std::size_t input_size() const { return layer_sizes.front(); }
  std::size_t output_size() const { return layer_sizes.back(); }
};

std::size_t parameter_count(const std::vector<std::size_t>& layer_sizes);

// Xavier-uniform weights, zero biases, drawn from `seed`.
DenseNet make_dense_net(std::vector<std::size_t> layer_sizes, std::vector<Activation> activations,
                        std::uint64_t seed);

struct Gradients {
  std::vector<double> values;
};

// Per-layer pre-activations and activations kept from a forward pass so
// the matching backward pass can reuse them. Reusable across calls; no
// allocation after the first evaluation of a given shape.
struct ForwardCache {
  std::vector<std::vector<double>> acts;  // acts[0] is the input
  std::vector<std::vector<double>> pre;
};

void forward_cached(const DenseNet& net, std::span<const double> input, ForwardCache& cache);
std::vector<double> forward(const DenseNet& net, std::span<const double> input);

// Reverse pass for <upstream, net(input)>: accumulates parameter
// gradients into param_grad (same layout as net.parameters) and writes
// the input gradient.
void backward_from_cache(const DenseNet& net, const ForwardCache& cache,
                         std::span<const double> upstream, std::span<double> param_grad,
                         std::span<double> input_grad);

std::pair<Gradients, std::vector<double>> backward(const DenseNet& net,
                                                   std::span<const double> input,
                                                   std::span<const double> upstream);

// Central finite differences on every parameter and input coordinate of
// sum(net(input)); returns the max relative error against backward().
double grad_check(const DenseNet& net, std::span<const double> input, double h);

nlohmann::ordered_json net_to_json(const DenseNet& net);
DenseNet net_from_json(const nlohmann::json& j);

}  // namespace svpf
