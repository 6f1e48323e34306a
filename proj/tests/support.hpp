#pragma once

// Small helpers shared by the unit tests and the acceptance runner.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "trigan/game.hpp"
#include "trigan/mlp.hpp"
#include "trigan/ops.hpp"
#include "trigan/tape.hpp"
#include "trigan/tensor.hpp"

namespace tgan::testing {

inline Tensor random_tensor(Shape s, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0,
                            bool requires_grad = false) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(s.size());
  for (double& x : v) x = u(rng);
  return Tensor(s, std::move(v), requires_grad);
}

// Makes a network output the constant probability p (or constant value p for
// an identity head): zero weights and hidden biases, final bias set so that
// the output activation yields p.
inline void force_constant(Mlp& net, double p) {
  for (const Tensor& w : net.weights()) {
    Tensor t = w;
    for (double& x : t.values()) x = 0.0;
  }
  for (const Tensor& b : net.biases()) {
    Tensor t = b;
    for (double& x : t.values()) x = 0.0;
  }
  Tensor last = net.biases().back();
  const double head =
      net.spec().output_activation == Activation::sigmoid ? std::log(p / (1.0 - p)) : p;
  for (double& x : last.values()) x = head;
}

inline ModelConfig tiny_model(Baseline kind = Baseline::delta_gan, std::size_t width = 8,
                              std::size_t depth = 2) {
  ModelConfig c;
  c.kind = kind;
  c.gen_hidden.assign(depth, width);
  c.disc_hidden.assign(depth, width);
  return c;
}

inline Batch random_batch(std::size_t m, std::mt19937_64& rng) {
  return {random_tensor({m, 1}, rng, -3, 3), random_tensor({m, 1}, rng, -3, 3),
          random_tensor({m, 1}, rng, -3, 3), random_tensor({m, 1}, rng, -3, 3)};
}

// Freshly initialized networks have zero biases, so a row whose hidden units
// are all inactive feeds exactly 0 into the next relu: a kink that central
// differences straddle. Random biases move every pre-activation off it.
inline void randomize_biases(TriGanModel& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (Mlp* net : {&m.gen_x, &m.gen_y, &m.disc1, &m.disc2})
    for (const Tensor& b : net->biases()) {
      Tensor t = b;
      for (double& x : t.values()) x = u(rng);
    }
}

// Smallest |pre-activation| over the hidden layers of `net` on `input`: the
// distance to the nearest relu kink. Central differences are only meaningful
// when it is large compared with the perturbation.
inline double kink_margin(const Mlp& net, const Tensor& input) {
  NoGradScope no_grad;
  double margin = INFINITY;
  Tensor h = input;
  const auto& W = net.weights();
  for (std::size_t l = 0; l + 1 < W.size(); ++l) {
    h = ops::add(ops::matmul(h, W[l]), net.biases()[l]);
    for (double v : h.values()) margin = std::min(margin, std::abs(v));
    h = ops::relu(h);
  }
  return margin;
}

// Kink margin over every network evaluation in the delta-gan losses, with the
// generator noise drawn exactly as sample_fake_pairs draws it from `noise_seed`.
inline double loss_kink_margin(const TriGanModel& m, const Batch& b, std::uint64_t noise_seed) {
  std::mt19937_64 r(noise_seed);
  const std::size_t rows = b.x_unpaired.rows();
  const Tensor zx = noise_tensor(rows, m.noise_dim, r);
  const Tensor zy = noise_tensor(rows, m.noise_dim, r);
  NoGradScope no_grad;
  const Tensor xf = m.gen_x.forward(ops::concat_cols(b.y_unpaired, zx));
  const Tensor yf = m.gen_y.forward(ops::concat_cols(b.x_unpaired, zy));
  return std::min({kink_margin(m.gen_x, ops::concat_cols(b.y_unpaired, zx)),
                   kink_margin(m.gen_y, ops::concat_cols(b.x_unpaired, zy)),
                   kink_margin(m.disc1, ops::concat_cols(b.x_paired, b.y_paired)),
                   kink_margin(m.disc1, ops::concat_cols(xf, b.y_unpaired)),
                   kink_margin(m.disc1, ops::concat_cols(b.x_unpaired, yf)),
                   kink_margin(m.disc2, ops::concat_cols(xf, b.y_unpaired)),
                   kink_margin(m.disc2, ops::concat_cols(b.x_unpaired, yf))});
}

// Bitwise snapshot of parameter values.
inline std::vector<std::vector<double>> snapshot(const std::vector<Tensor>& params) {
  std::vector<std::vector<double>> out;
  for (const Tensor& p : params) out.emplace_back(p.values().begin(), p.values().end());
  return out;
}

}  // namespace tgan::testing
