#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trigan/tensor.hpp"

namespace tgan {

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam over a fixed parameter group. Moments are
// shape-congruent with the parameters they track.
class Adam {
 public:
  Adam() = default;
  Adam(AdamConfig config, std::vector<Tensor> params, std::vector<std::string> names = {});

  // Applies one update from the current gradients. Gradients are left as is;
  // the caller zeroes them. Throws NumericError naming the first parameter
  // with a non-finite gradient, before touching any parameter.
  void step();

  std::int64_t steps_taken() const { return t_; }
  const AdamConfig& config() const { return config_; }
  void set_lr(double lr) { config_.lr = lr; }
  const std::vector<Tensor>& params() const { return params_; }
  const std::vector<std::vector<double>>& first_moment() const { return m_; }
  const std::vector<std::vector<double>>& second_moment() const { return v_; }

 private:
  AdamConfig config_;
  std::vector<Tensor> params_;
  std::vector<std::string> names_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::int64_t t_ = 0;
};

}  // namespace tgan
