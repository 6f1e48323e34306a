#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "trigan/tensor.hpp"
#include "json.hpp"

namespace tgan {

enum class Activation { identity, relu, leaky_relu, tanh, sigmoid };

const char* activation_name(Activation a);
Activation parse_activation(const std::string& name);

struct MlpSpec {
  std::size_t input_width = 1;
  std::vector<std::size_t> hidden_widths;
  std::size_t output_width = 1;
  Activation hidden_activation = Activation::relu;   // relu | leaky_relu | tanh
  Activation output_activation = Activation::identity;  // identity | sigmoid | tanh
  double leaky_slope = 0.2;

  std::size_t layer_count() const { return hidden_widths.size() + 1; }
  std::vector<std::size_t> widths() const;
  std::size_t parameter_count() const;
  // Throws ContractViolation on zero widths or unsupported activations.
  void validate() const;

  bool operator==(const MlpSpec&) const = default;
};

class Mlp {
 public:
  Mlp() = default;
  Mlp(MlpSpec spec, std::vector<Tensor> weights, std::vector<Tensor> biases);

  const MlpSpec& spec() const { return spec_; }
  const std::vector<Tensor>& weights() const { return weights_; }
  const std::vector<Tensor>& biases() const { return biases_; }

  // Affine + hidden activation per hidden layer, affine + output activation
  // at the end. Input is batch x input_width.
  Tensor forward(const Tensor& input) const;
  // Same as forward() without the output activation.
  Tensor forward_logits(const Tensor& input) const;

  // Weights and biases interleaved layer by layer.
  std::vector<Tensor> parameters() const;
  std::vector<std::string> parameter_names(const std::string& prefix) const;
  std::size_t parameter_count() const;

  void set_requires_grad(bool on);
  void zero_grad();
  Mlp clone() const;

 private:
  MlpSpec spec_;
  std::vector<Tensor> weights_;
  std::vector<Tensor> biases_;
};

// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
Mlp mlp_init(const MlpSpec& spec, std::uint64_t seed);

Tensor apply_activation(const Tensor& x, Activation a, double leaky_slope);

nlohmann::json to_json(const MlpSpec& spec);
MlpSpec mlp_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

}  // namespace tgan
