#include "core/dense_net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/rng.hpp"

namespace svpf {

const char* activation_name(Activation activation) {
  switch (activation) {
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Softplus: return "softplus";
    default: return "identity";
  }
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  if (name == "softplus") return Activation::Softplus;
  if (name == "identity") return Activation::Identity;
  throw std::invalid_argument("unknown activation: " + name);
}

namespace {

double apply_activation(Activation a, double x) {
  switch (a) {
    case Activation::Tanh: return std::tanh(x);
    case Activation::Relu: return x > 0.0 ? x : 0.0;
    case Activation::Softplus:
      return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    default: return x;
  }
}

// Derivative expressed from the pre-activation and the activation value.
double activation_derivative(Activation a, double pre, double act) {
  switch (a) {
    case Activation::Tanh: return 1.0 - act * act;
    case Activation::Relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::Softplus: return 1.0 / (1.0 + std::exp(-pre));
    default: return 1.0;
  }
}

void check_shape(const DenseNet& net) {
  if (net.layer_sizes.size() < 2) throw std::invalid_argument("net needs at least two layers");
  if (net.activations.size() != net.layer_sizes.size() - 1)
    throw std::invalid_argument("one activation per layer transition required");
  if (net.parameters.size() != parameter_count(net.layer_sizes))
    throw std::invalid_argument("parameter vector length mismatch");
}

}  // namespace

std::size_t parameter_count(const std::vector<std::size_t>& layer_sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l)
    n += layer_sizes[l] * layer_sizes[l + 1] + layer_sizes[l + 1];
  return n;
}

DenseNet make_dense_net(std::vector<std::size_t> layer_sizes, std::vector<Activation> activations,
                        std::uint64_t seed) {
  DenseNet net;
  net.layer_sizes = std::move(layer_sizes);
  net.activations = std::move(activations);
  net.seed = seed;
  net.parameters.assign(parameter_count(net.layer_sizes), 0.0);
  check_shape(net);
  Rng rng(seed);
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < net.layer_sizes.size(); ++l) {
    const std::size_t n_in = net.layer_sizes[l];
    const std::size_t n_out = net.layer_sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(n_in + n_out));
    for (std::size_t k = 0; k < n_in * n_out; ++k)
      net.parameters[offset + k] = (2.0 * rng.uniform() - 1.0) * limit;
    offset += n_in * n_out + n_out;  // biases stay zero
  }
  return net;
}

void forward_cached(const DenseNet& net, std::span<const double> input, ForwardCache& cache) {
  check_shape(net);
  if (input.size() != net.input_size()) throw std::invalid_argument("input dimension mismatch");
  const std::size_t layers = net.num_layers();
  cache.acts.resize(layers + 1);
  cache.pre.resize(layers);
  cache.acts[0].assign(input.begin(), input.end());

  std::size_t offset = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t n_in = net.layer_sizes[l];
    const std::size_t n_out = net.layer_sizes[l + 1];
    const double* w = net.parameters.data() + offset;
    const double* b = w + n_in * n_out;
    cache.pre[l].resize(n_out);
    cache.acts[l + 1].resize(n_out);
    const double* in = cache.acts[l].data();
    for (std::size_t o = 0; o < n_out; ++o) {
      double z = b[o];
      const double* row = w + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) z += row[i] * in[i];
      cache.pre[l][o] = z;
      cache.acts[l + 1][o] = apply_activation(net.activations[l], z);
    }
    offset += n_in * n_out + n_out;
  }
}

std::vector<double> forward(const DenseNet& net, std::span<const double> input) {
  ForwardCache cache;
  forward_cached(net, input, cache);
  return cache.acts.back();
}

void backward_from_cache(const DenseNet& net, const ForwardCache& cache,
                         std::span<const double> upstream, std::span<double> param_grad,
                         std::span<double> input_grad) {
  if (upstream.size() != net.output_size())
    throw std::invalid_argument("upstream dimension mismatch");
  if (param_grad.size() != net.parameters.size())
    throw std::invalid_argument("param_grad length mismatch");
  if (input_grad.size() != net.input_size())
    throw std::invalid_argument("input_grad length mismatch");

  const std::size_t layers = net.num_layers();
  std::vector<std::size_t> offsets(layers);
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    offsets[l] = offset;
    offset += net.layer_sizes[l] * net.layer_sizes[l + 1] + net.layer_sizes[l + 1];
  }

  std::vector<double> d_act(upstream.begin(), upstream.end());
  std::vector<double> delta, d_below;
  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t n_in = net.layer_sizes[l];
    const std::size_t n_out = net.layer_sizes[l + 1];
    const double* w = net.parameters.data() + offsets[l];
    double* wg = param_grad.data() + offsets[l];
    double* bg = wg + n_in * n_out;
    const double* in = cache.acts[l].data();

    delta.resize(n_out);
    for (std::size_t o = 0; o < n_out; ++o)
      delta[o] =
          d_act[o] * activation_derivative(net.activations[l], cache.pre[l][o], cache.acts[l + 1][o]);

    d_below.assign(n_in, 0.0);
    for (std::size_t o = 0; o < n_out; ++o) {
      const double d = delta[o];
      const double* row = w + o * n_in;
      double* grow = wg + o * n_in;
      for (std::size_t i = 0; i < n_in; ++i) {
        grow[i] += d * in[i];
        d_below[i] += row[i] * d;
      }
      bg[o] += d;
    }
    d_act = d_below;
  }
  std::copy(d_act.begin(), d_act.end(), input_grad.begin());
}

std::pair<Gradients, std::vector<double>> backward(const DenseNet& net,
                                                   std::span<const double> input,
                                                   std::span<const double> upstream) {
  ForwardCache cache;
  forward_cached(net, input, cache);
  Gradients grads;
  grads.values.assign(net.parameters.size(), 0.0);
  std::vector<double> input_grad(net.input_size(), 0.0);
  backward_from_cache(net, cache, upstream, grads.values, input_grad);
  return {std::move(grads), std::move(input_grad)};
}

double grad_check(const DenseNet& net, std::span<const double> input, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grad_check requires h > 0");
  const std::vector<double> ones(net.output_size(), 1.0);
  const auto [grads, input_grad] = backward(net, input, ones);

  const auto scalar_out = [&](const DenseNet& n, std::span<const double> x) {
    double s = 0.0;
    for (double v : forward(n, x)) s += v;
    return s;
  };
  const auto rel = [](double a, double f) {
    return std::abs(a - f) / std::max({std::abs(a), std::abs(f), 1e-6});
  };

  double worst = 0.0;
  DenseNet probe = net;
  for (std::size_t k = 0; k < probe.parameters.size(); ++k) {
    const double saved = probe.parameters[k];
    probe.parameters[k] = saved + h;
    const double up = scalar_out(probe, input);
    probe.parameters[k] = saved - h;
    const double down = scalar_out(probe, input);
    probe.parameters[k] = saved;
    worst = std::max(worst, rel(grads.values[k], (up - down) / (2.0 * h)));
  }
  std::vector<double> x(input.begin(), input.end());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + h;
    const double up = scalar_out(net, x);
    x[k] = saved - h;
    const double down = scalar_out(net, x);
    x[k] = saved;
    worst = std::max(worst, rel(input_grad[k], (up - down) / (2.0 * h)));
  }
  return worst;
}

nlohmann::ordered_json net_to_json(const DenseNet& net) {
  nlohmann::ordered_json j;
  j["layer_sizes"] = net.layer_sizes;
  std::vector<std::string> acts;
  for (auto a : net.activations) acts.emplace_back(activation_name(a));
  j["activations"] = acts;
  j["parameters"] = net.parameters;
  j["seed"] = net.seed;
  return j;
}

DenseNet net_from_json(const nlohmann::json& j) {
  DenseNet net;
  net.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
  for (const auto& name : j.at("activations"))
    net.activations.push_back(activation_from_name(name.get<std::string>()));
  net.parameters = j.at("parameters").get<std::vector<double>>();
  net.seed = j.at("seed").get<std::uint64_t>();
  check_shape(net);
  return net;
}

}  // namespace svpf
