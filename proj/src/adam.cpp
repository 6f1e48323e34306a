#include "trigan/adam.hpp"

#include <cmath>

#include "trigan/errors.hpp"

namespace tgan {

Adam::Adam(AdamConfig config, std::vector<Tensor> params, std::vector<std::string> names)
    : config_(config), params_(std::move(params)), names_(std::move(names)) {
  require(config_.lr >= 0.0, "Adam: lr must be >= 0");
  require(config_.beta1 >= 0.0 && config_.beta1 < 1.0, "Adam: beta1 must lie in [0, 1)");
  require(config_.beta2 >= 0.0 && config_.beta2 < 1.0, "Adam: beta2 must lie in [0, 1)");
  require(config_.eps > 0.0, "Adam: eps must be positive");
  if (names_.empty())
    for (std::size_t i = 0; i < params_.size(); ++i) names_.push_back("param" + std::to_string(i));
  require(names_.size() == params_.size(), "Adam: one name per parameter");
  for (const auto& p : params_) {
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
}

void Adam::step() {
  for (std::size_t i = 0; i < params_.size(); ++i) {
    // g - g is 0 for finite g and NaN otherwise; the sum stays vectorizable.
    double probe = 0.0;
    for (double g : params_[i].grad()) probe += g - g;
    if (probe != 0.0 || std::isnan(probe))
      throw NumericError("Adam: non-finite gradient in " + names_[i]);
  }

  ++t_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  const double lr = config_.lr, eps = config_.eps;
  for (std::size_t i = 0; i < params_.size(); ++i) {
    double* w = params_[i].values().data();
    const double* g = params_[i].grad().data();
    double* m = m_[i].data();
    double* v = v_[i].data();
    const std::size_t len = m_[i].size();
#pragma omp simd
    for (std::size_t k = 0; k < len; ++k) {
      m[k] = b1 * m[k] + (1.0 - b1) * g[k];
      v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
      const double mhat = m[k] / c1;
      const double vhat = v[k] / c2;
      w[k] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
}

}  // namespace tgan
