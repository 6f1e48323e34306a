#pragma once

#include "trigan/tensor.hpp"

namespace tgan::ops {

// Probability clamp used before every log of a discriminator output.
inline constexpr double kProbEps = 1e-7;

// Every op computes its result eagerly. When a tape is active on the calling
// thread and some input requires a gradient, the op is also recorded.
// Shape violations throw ContractViolation naming both shapes.

Tensor matmul(const Tensor& a, const Tensor& b);
// Same shapes, or `b` a 1 x cols row broadcast over the rows of `a`.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor neg(const Tensor& a);
Tensor scale(const Tensor& a, double factor);

Tensor relu(const Tensor& a);
Tensor leaky_relu(const Tensor& a, double slope);
Tensor tanh(const Tensor& a);
// Output clamped to [kProbEps, 1 - kProbEps].
Tensor sigmoid(const Tensor& a);
// Throws DomainError on any entry <= 0.
Tensor log(const Tensor& a);
// log(sigmoid(x)) computed as -softplus(-x); finite for every finite x.
Tensor log_sigmoid(const Tensor& a);
// Gradient passes strictly inside (lo, hi) and is zero elsewhere.
Tensor clamp(const Tensor& a, double lo, double hi);

// Column means: (n x c) -> (1 x c).
Tensor mean_rows(const Tensor& a);
// Sum of all entries as a 1 x 1 tensor.
Tensor sum(const Tensor& a);
// Mean of all entries as a 1 x 1 tensor.
Tensor mean(const Tensor& a);
Tensor concat_cols(const Tensor& a, const Tensor& b);

// Logit bound equivalent to clamping a probability to [kProbEps, 1 - kProbEps].
double prob_logit_bound();

}  // namespace tgan::ops
