#include "trigan/mlp.hpp"

#include <cmath>
#include <random>

#include "trigan/errors.hpp"
#include "trigan/ops.hpp"

namespace tgan {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "?";
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "leaky_relu" || name == "leaky-relu") return Activation::leaky_relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw ContractViolation("unknown activation '" + name + "'");
}

std::vector<std::size_t> MlpSpec::widths() const {
  std::vector<std::size_t> w;
  w.reserve(hidden_widths.size() + 2);
  w.push_back(input_width);
  w.insert(w.end(), hidden_widths.begin(), hidden_widths.end());
  w.push_back(output_width);
  return w;
}

std::size_t MlpSpec::parameter_count() const {
  const auto w = widths();
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) n += w[i] * w[i + 1] + w[i + 1];
  return n;
}

void MlpSpec::validate() const {
  for (std::size_t w : widths()) require(w >= 1, "MlpSpec: layer widths must be >= 1");
  require(hidden_activation == Activation::relu || hidden_activation == Activation::leaky_relu ||
              hidden_activation == Activation::tanh,
          std::string("MlpSpec: unsupported hidden activation ") +
              activation_name(hidden_activation));
  require(output_activation == Activation::identity ||
              output_activation == Activation::sigmoid || output_activation == Activation::tanh,
          std::string("MlpSpec: unsupported output activation ") +
              activation_name(output_activation));
}

Mlp::Mlp(MlpSpec spec, std::vector<Tensor> weights, std::vector<Tensor> biases)
    : spec_(std::move(spec)), weights_(std::move(weights)), biases_(std::move(biases)) {
  spec_.validate();
  const auto w = spec_.widths();
  require(weights_.size() == spec_.layer_count() && biases_.size() == spec_.layer_count(),
          "Mlp: layer count does not match spec");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    require(weights_[i].shape() == Shape{w[i], w[i + 1]},
            "Mlp: layer " + std::to_string(i) + " weight shape " + weights_[i].shape().str());
    require(biases_[i].shape() == Shape{1, w[i + 1]},
            "Mlp: layer " + std::to_string(i) + " bias shape " + biases_[i].shape().str());
  }
}

Tensor apply_activation(const Tensor& x, Activation a, double leaky_slope) {
  switch (a) {
    case Activation::identity: return x;
    case Activation::relu: return ops::relu(x);
    case Activation::leaky_relu: return ops::leaky_relu(x, leaky_slope);
    case Activation::tanh: return ops::tanh(x);
    case Activation::sigmoid: return ops::sigmoid(x);
  }
  return x;
}

Tensor Mlp::forward_logits(const Tensor& input) const {
  require(input.cols() == spec_.input_width,
          "Mlp::forward: input width " + std::to_string(input.cols()) + ", expected " +
              std::to_string(spec_.input_width));
  Tensor h = input;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    h = ops::add(ops::matmul(h, weights_[i]), biases_[i]);
    if (i + 1 < weights_.size()) h = apply_activation(h, spec_.hidden_activation, spec_.leaky_slope);
  }
  return h;
}

Tensor Mlp::forward(const Tensor& input) const {
  return apply_activation(forward_logits(input), spec_.output_activation, spec_.leaky_slope);
}

std::vector<Tensor> Mlp::parameters() const {
  std::vector<Tensor> p;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    p.push_back(weights_[i]);
    p.push_back(biases_[i]);
  }
  return p;
}

std::vector<std::string> Mlp::parameter_names(const std::string& prefix) const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    names.push_back(prefix + ".W" + std::to_string(i));
    names.push_back(prefix + ".b" + std::to_string(i));
  }
  return names;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : parameters()) n += t.size();
  return n;
}

void Mlp::set_requires_grad(bool on) {
  for (auto& t : parameters()) t.set_requires_grad(on);
}

void Mlp::zero_grad() {
  for (auto& t : parameters()) t.zero_grad();
}

Mlp Mlp::clone() const {
  std::vector<Tensor> w, b;
  for (const auto& t : weights_) w.push_back(t.clone());
  for (const auto& t : biases_) b.push_back(t.clone());
  return Mlp(spec_, std::move(w), std::move(b));
}

Mlp mlp_init(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  const auto w = spec.widths();
  std::vector<Tensor> weights, biases;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double bound = std::sqrt(6.0 / static_cast<double>(w[i] + w[i + 1]));
    std::uniform_real_distribution<double> dist(-bound, bound);
    std::vector<double> v(w[i] * w[i + 1]);
    for (double& x : v) x = dist(rng);
    weights.emplace_back(Shape{w[i], w[i + 1]}, std::move(v), true);
    biases.push_back(Tensor::zeros({1, w[i + 1]}, true));
  }
  return Mlp(spec, std::move(weights), std::move(biases));
}

nlohmann::json to_json(const MlpSpec& spec) {
  return {{"input_width", spec.input_width},
          {"hidden_widths", spec.hidden_widths},
          {"output_width", spec.output_width},
          {"hidden_activation", activation_name(spec.hidden_activation)},
          {"output_activation", activation_name(spec.output_activation)},
          {"leaky_slope", spec.leaky_slope}};
}

MlpSpec mlp_spec_from_json(const nlohmann::json& j) {
  MlpSpec s;
  s.input_width = j.at("input_width").get<std::size_t>();
  s.hidden_widths = j.at("hidden_widths").get<std::vector<std::size_t>>();
  s.output_width = j.at("output_width").get<std::size_t>();
  s.hidden_activation = parse_activation(j.at("hidden_activation").get<std::string>());
  s.output_activation = parse_activation(j.at("output_activation").get<std::string>());
  s.leaky_slope = j.value("leaky_slope", 0.2);
  s.validate();
  return s;
}

nlohmann::json to_json(const Mlp& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (std::size_t i = 0; i < net.weights().size(); ++i) {
    const auto w = net.weights()[i].values();
    const auto b = net.biases()[i].values();
    layers.push_back({{"weight", std::vector<double>(w.begin(), w.end())},
                      {"bias", std::vector<double>(b.begin(), b.end())}});
  }
  return {{"spec", to_json(net.spec())}, {"layers", layers}};
}

Mlp mlp_from_json(const nlohmann::json& j) {
  const MlpSpec spec = mlp_spec_from_json(j.at("spec"));
  const auto w = spec.widths();
  const auto& layers = j.at("layers");
  require(layers.size() == spec.layer_count(), "checkpoint: layer count mismatch");
  std::vector<Tensor> weights, biases;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    weights.emplace_back(Shape{w[i], w[i + 1]}, layers[i].at("weight").get<std::vector<double>>(),
                         true);
    biases.emplace_back(Shape{1, w[i + 1]}, layers[i].at("bias").get<std::vector<double>>(), true);
  }
  return Mlp(spec, std::move(weights), std::move(biases));
}

}  // namespace tgan
