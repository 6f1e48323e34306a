#pragma once

// The three-player joint-distribution game: two conditional generators
// G_x(y, z) -> x and G_y(x, z) -> y, a discriminator D1 separating real pairs
// from both kinds of fake pairs, and a discriminator D2 separating the two
// kinds of fake pairs. Also hosts the two-player "Triple GAN-s" baseline that
// pits both generators against one discriminator with weights (1 - alpha)
// and alpha.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "trigan/adam.hpp"
#include "trigan/dataset.hpp"
#include "trigan/mlp.hpp"
#include "trigan/tensor.hpp"

namespace tgan {

enum class Baseline { delta_gan, triple_gan_s };

const char* baseline_name(Baseline b);
Baseline parse_baseline(const std::string& name);

struct ModelConfig {
  Baseline kind = Baseline::delta_gan;
  double alpha = 0.5;  // triple_gan_s only; must lie in (0, 1)
  std::size_t x_dim = 1;
  std::size_t y_dim = 1;
  std::size_t noise_dim = 2;
  std::vector<std::size_t> gen_hidden{500, 500, 500, 500};
  std::vector<std::size_t> disc_hidden{500, 500, 500, 500};
  Activation hidden_activation = Activation::relu;
  AdamConfig gen_adam;
  AdamConfig disc_adam;

  void validate() const;
};

struct TriGanModel {
  Baseline kind = Baseline::delta_gan;
  double alpha = 0.5;
  std::size_t noise_dim = 2;
  Mlp gen_x;  // (y, z) -> x
  Mlp gen_y;  // (x, z) -> y
  Mlp disc1;  // (x, y) -> P(real); the single discriminator for triple_gan_s
  Mlp disc2;  // (x, y) -> P(from G_x | fake); empty for triple_gan_s
  Adam gen_opt;
  Adam disc_opt;

  std::size_t x_dim() const { return gen_x.spec().output_width; }
  std::size_t y_dim() const { return gen_y.spec().output_width; }
  std::vector<Tensor> generator_params() const;
  std::vector<Tensor> discriminator_params() const;
  std::vector<Mlp*> discriminators();
  // Deep copy with fresh optimizer state.
  TriGanModel clone() const;
};

TriGanModel make_model(const ModelConfig& config, std::uint64_t seed);
// Wraps existing networks; optimizers start fresh.
TriGanModel assemble_model(Baseline kind, double alpha, std::size_t noise_dim, Mlp gen_x,
                           Mlp gen_y, Mlp disc1, Mlp disc2, const AdamConfig& gen_adam,
                           const AdamConfig& disc_adam);

// M paired rows (x_p, y_p) and M unpaired rows of each marginal.
struct Batch {
  Tensor x_paired;
  Tensor y_paired;
  Tensor x_unpaired;
  Tensor y_unpaired;

  std::size_t size() const { return x_paired.rows(); }
  void validate() const;
};

// Draws batches for semi-supervised training: the paired block comes from the
// rows marked paired, the unpaired blocks independently from all rows of
// each marginal, all uniformly with replacement.
class BatchSampler {
 public:
  // Throws ContractViolation when the dataset has no paired rows.
  BatchSampler(const PairDataset& dataset, std::size_t batch_size);
  Batch next(std::mt19937_64& rng) const;
  std::size_t batch_size() const { return batch_size_; }

 private:
  const PairDataset* dataset_;
  std::vector<std::size_t> paired_;
  std::size_t batch_size_;
};

struct FakePairs {
  Tensor x_fake;  // G_x(y_unpaired, z)
  Tensor y_fake;  // G_y(x_unpaired, z)
};

// Fresh N(0, I) noise per row and per direction. Outputs stay attached to
// the active tape.
FakePairs sample_fake_pairs(const TriGanModel& model, const Tensor& x_unpaired,
                            const Tensor& y_unpaired, std::mt19937_64& rng);

struct LossReport {
  double l_d1 = 0.0;
  double l_d2 = 0.0;
  double l_g1 = 0.0;
  double l_g2 = 0.0;
  double rho11 = 0.0;  // D1 on real pairs
  double rho12 = 0.0;  // D1 on (x_fake, y)
  double rho13 = 0.0;  // D1 on (x, y_fake)
  double rho21 = 0.0;  // D2 on (x_fake, y)
  double rho22 = 0.0;  // D2 on (x, y_fake)
};

struct LossTerms {
  Tensor first;   // L_d1 or L_g1
  Tensor second;  // L_d2 or L_g2
  LossReport report;
};

// L_d1 = -mean log rho11 - mean log(1 - rho12) - mean log(1 - rho13)
// L_d2 = -mean log rho21 - mean log(1 - rho22)
// Fakes are detached, so no gradient reaches the generators.
LossTerms discriminator_losses(const TriGanModel& model, const Batch& batch,
                               const FakePairs& fakes);

// L_g1 = -mean log rho12 - mean log(1 - rho21)
// L_g2 = -mean log rho13 - mean log rho22
// Gradients flow through the discriminators into the generators.
LossTerms generator_losses(const TriGanModel& model, const Batch& batch, const FakePairs& fakes);

// One discriminator update on L_d1 + L_d2, then one generator update on
// L_g1 + L_g2 with the discriminators frozen; both phases share one set of
// fake pairs. L_d* are measured before the discriminator update and L_g*
// before the generator update.
LossReport train_step(TriGanModel& model, const Batch& batch, std::mt19937_64& rng);
// Discriminator phase only (extra critic updates).
LossReport discriminator_step(TriGanModel& model, const Batch& batch, std::mt19937_64& rng);

// Monte-Carlo estimate of
//   E log D1(x, y) + E log((1 - D1) D2)(x_fake, y) + E log((1 - D1)(1 - D2))(x, y_fake)
// for delta_gan, or of the weighted two-player value for triple_gan_s.
double value_function_estimate(const TriGanModel& model, const Batch& batch,
                               std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Triple GAN-s baseline: V = E log D(x, y) + (1 - alpha) E log(1 - D(x_fake, y))
//                            + alpha E log(1 - D(x, y_fake))

struct TripleGanSConfig {
  double alpha = 0.5;
  void validate() const;
};

struct TripleGanSReport {
  double l_d = 0.0;   // -V with fakes detached
  double l_g1 = 0.0;  // -(1 - alpha) mean log D(x_fake, y)
  double l_g2 = 0.0;  // -alpha mean log D(x, y_fake)
  double rho_real = 0.0;
  double rho_xfake = 0.0;
  double rho_yfake = 0.0;
};

struct TripleGanSTerms {
  Tensor disc;
  Tensor gen1;
  Tensor gen2;
  TripleGanSReport report;
};

TripleGanSTerms triple_gan_s_losses(const TripleGanSConfig& config, const TriGanModel& model,
                                    const Batch& batch, const FakePairs& fakes);
TripleGanSReport triple_gan_s_train_step(TriGanModel& model, const Batch& batch,
                                         std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Checkpoints: versioned JSON with each network's spec and parameters.

inline constexpr int kCheckpointVersion = 1;

void save_checkpoint(const TriGanModel& model, const std::filesystem::path& path);
// Optimizers of the loaded model use the given settings and start fresh.
TriGanModel load_checkpoint(const std::filesystem::path& path, const AdamConfig& gen_adam = {},
                            const AdamConfig& disc_adam = {});

// Rows -> tensors.
Tensor column_tensor(const std::vector<double>& v);
Tensor noise_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

}  // namespace tgan
