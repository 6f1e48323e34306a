#pragma once

// Random-configuration gradient checks for every autodiff primitive, shared by
// the unit tests and the acceptance runner.

#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "support.hpp"
#include "trigan/ops.hpp"

namespace tgan::testing {

// Scalar test loss sum(w .* y) with fixed random weights, so every output
// entry receives a distinct upstream gradient.
inline Tensor weighted_sum(const Tensor& y, const Tensor& w) { return ops::sum(ops::mul(y, w)); }

// Pushes entries away from kinks so central differences stay on one side.
inline void avoid_kinks(Tensor& t, double lo, double hi, double margin) {
  for (double& x : t.values()) {
    if (std::abs(x - lo) < margin) x = lo + (x < lo ? -margin : margin);
    if (std::abs(x - hi) < margin) x = hi + (x < hi ? -margin : margin);
  }
}

struct OpCase {
  const char* name;
  // Builds the inputs for one random configuration and returns the loss
  // closure together with the parameters to check.
  std::function<std::pair<std::function<Tensor()>, std::vector<Tensor>>(std::mt19937_64&)> make;
};

inline std::vector<OpCase> op_cases() {
  auto dims = [](std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> d(1, 5);
    return Shape{d(rng), d(rng)};
  };
  auto unary_case = [dims](const char* name, std::function<Tensor(const Tensor&)> op,
                           double lo, double hi, double kink_lo = NAN, double kink_hi = NAN) {
    return OpCase{name, [=](std::mt19937_64& rng) {
                    const Shape s = dims(rng);
                    Tensor a = random_tensor(s, rng, lo, hi, true);
                    if (!std::isnan(kink_lo)) avoid_kinks(a, kink_lo, kink_hi, 1e-3);
                    const Tensor w = random_tensor(s, rng);
                    return std::make_pair(std::function<Tensor()>([=] {
                                            return weighted_sum(op(a), w);
                                          }),
                                          std::vector<Tensor>{a});
                  }};
  };

  std::vector<OpCase> cases;
  cases.push_back({"matmul", [](std::mt19937_64& rng) {
                     std::uniform_int_distribution<std::size_t> d(1, 6);
                     const std::size_t m = d(rng), k = d(rng), n = d(rng);
                     Tensor a = random_tensor({m, k}, rng, -1, 1, true);
                     Tensor b = random_tensor({k, n}, rng, -1, 1, true);
                     const Tensor w = random_tensor({m, n}, rng);
                     return std::make_pair(std::function<Tensor()>([=] {
                                             return weighted_sum(ops::matmul(a, b), w);
                                           }),
                                           std::vector<Tensor>{a, b});
                   }});
  for (const bool broadcast : {false, true}) {
    for (const bool subtract : {false, true}) {
      cases.push_back({subtract ? (broadcast ? "sub(bias row)" : "sub")
                                : (broadcast ? "add(bias row)" : "add"),
                       [=](std::mt19937_64& rng) {
                         const Shape s = dims(rng);
                         Tensor a = random_tensor(s, rng, -1, 1, true);
                         Tensor b = random_tensor(broadcast ? Shape{1, s.cols} : s, rng, -1, 1,
                                                  true);
                         const Tensor w = random_tensor(s, rng);
                         return std::make_pair(std::function<Tensor()>([=] {
                                                 return weighted_sum(
                                                     subtract ? ops::sub(a, b) : ops::add(a, b),
                                                     w);
                                               }),
                                               std::vector<Tensor>{a, b});
                       }});
    }
  }
  cases.push_back({"mul", [dims](std::mt19937_64& rng) {
                     const Shape s = dims(rng);
                     Tensor a = random_tensor(s, rng, -1, 1, true);
                     Tensor b = random_tensor(s, rng, -1, 1, true);
                     const Tensor w = random_tensor(s, rng);
                     return std::make_pair(std::function<Tensor()>([=] {
                                             return weighted_sum(ops::mul(a, b), w);
                                           }),
                                           std::vector<Tensor>{a, b});
                   }});
  cases.push_back(unary_case("neg", [](const Tensor& a) { return ops::neg(a); }, -2, 2));
  cases.push_back(
      unary_case("scale", [](const Tensor& a) { return ops::scale(a, -1.7); }, -2, 2));
  cases.push_back(unary_case("relu", [](const Tensor& a) { return ops::relu(a); }, -2, 2, 0, 0));
  cases.push_back(unary_case(
      "leaky_relu", [](const Tensor& a) { return ops::leaky_relu(a, 0.2); }, -2, 2, 0, 0));
  cases.push_back(unary_case("tanh", [](const Tensor& a) { return ops::tanh(a); }, -3, 3));
  cases.push_back(unary_case("sigmoid", [](const Tensor& a) { return ops::sigmoid(a); }, -6, 6));
  cases.push_back(unary_case("log", [](const Tensor& a) { return ops::log(a); }, 0.1, 3));
  // Beyond |x| ~ 8 the slope sigma(-x) drops under the rounding noise of the
  // weighted sum; the saturated tails get a single-entry check below.
  cases.push_back(
      unary_case("log_sigmoid", [](const Tensor& a) { return ops::log_sigmoid(a); }, -8, 8));
  cases.push_back(unary_case(
      "clamp", [](const Tensor& a) { return ops::clamp(a, -0.5, 0.7); }, -2, 2, -0.5, 0.7));
  cases.push_back({"mean_rows", [dims](std::mt19937_64& rng) {
                     const Shape s = dims(rng);
                     Tensor a = random_tensor(s, rng, -1, 1, true);
                     const Tensor w = random_tensor({1, s.cols}, rng);
                     return std::make_pair(std::function<Tensor()>([=] {
                                             return weighted_sum(ops::mean_rows(a), w);
                                           }),
                                           std::vector<Tensor>{a});
                   }});
  cases.push_back({"sum", [dims](std::mt19937_64& rng) {
                     Tensor a = random_tensor(dims(rng), rng, -1, 1, true);
                     return std::make_pair(std::function<Tensor()>([=] {
                                             return ops::scale(ops::sum(ops::mul(a, a)), 0.5);
                                           }),
                                           std::vector<Tensor>{a});
                   }});
  cases.push_back({"mean", [dims](std::mt19937_64& rng) {
                     Tensor a = random_tensor(dims(rng), rng, -1, 1, true);
                     return std::make_pair(std::function<Tensor()>([=] {
                                             return ops::mean(ops::mul(a, a));
                                           }),
                                           std::vector<Tensor>{a});
                   }});
  cases.push_back({"concat_cols", [](std::mt19937_64& rng) {
                     std::uniform_int_distribution<std::size_t> d(1, 5);
                     const std::size_t r = d(rng), ca = d(rng), cb = d(rng);
                     Tensor a = random_tensor({r, ca}, rng, -1, 1, true);
                     Tensor b = random_tensor({r, cb}, rng, -1, 1, true);
                     const Tensor w = random_tensor({r, ca + cb}, rng);
                     return std::make_pair(std::function<Tensor()>([=] {
                                             return weighted_sum(ops::concat_cols(a, b), w);
                                           }),
                                           std::vector<Tensor>{a, b});
                   }});
  return cases;
}

}  // namespace tgan::testing
