#include "trigan/game.hpp"

#include <cmath>
#include <fstream>

#include "trigan/errors.hpp"
#include "trigan/ops.hpp"
#include "trigan/tape.hpp"

namespace tgan {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Temporarily stops gradient accumulation into a set of networks.
class FreezeGuard {
 public:
  explicit FreezeGuard(std::vector<Mlp*> nets) : nets_(std::move(nets)) {
    for (Mlp* n : nets_) n->set_requires_grad(false);
  }
  ~FreezeGuard() {
    for (Mlp* n : nets_) n->set_requires_grad(true);
  }
  FreezeGuard(const FreezeGuard&) = delete;
  FreezeGuard& operator=(const FreezeGuard&) = delete;

 private:
  std::vector<Mlp*> nets_;
};

// Discriminator logit on (x, y), clamped so that sigmoid(logit) stays in
// [kProbEps, 1 - kProbEps].
Tensor logits(const Mlp& d, const Tensor& x, const Tensor& y) {
  const double bound = ops::prob_logit_bound();
  return ops::clamp(d.forward_logits(ops::concat_cols(x, y)), -bound, bound);
}

Tensor mean_log_p(const Tensor& logit) { return ops::mean(ops::log_sigmoid(logit)); }
Tensor mean_log_1mp(const Tensor& logit) { return ops::mean(ops::log_sigmoid(ops::neg(logit))); }

double mean_prob(const Tensor& logit) {
  double s = 0.0;
  for (double a : logit.values()) s += 1.0 / (1.0 + std::exp(-a));
  return s / static_cast<double>(logit.size());
}

Tensor plus(const Tensor& a, const Tensor& b) { return ops::add(a, b); }

void zero_all(const std::vector<Tensor>& params) {
  for (Tensor t : params) t.zero_grad();
}

void require_delta(const TriGanModel& m) {
  require(m.kind == Baseline::delta_gan, "operation requires a delta-gan model");
}

void require_triple(const TriGanModel& m) {
  require(m.kind == Baseline::triple_gan_s, "operation requires a triple-gan-s model");
}

Tensor tgs_disc_loss(double alpha, const Mlp& d, const Batch& b, const Tensor& x_fake,
                     const Tensor& y_fake, TripleGanSReport& rep) {
  const Tensor a_r = logits(d, b.x_paired, b.y_paired);
  const Tensor a_x = logits(d, x_fake, b.y_unpaired);
  const Tensor a_y = logits(d, b.x_unpaired, y_fake);
  rep.rho_real = mean_prob(a_r);
  rep.rho_xfake = mean_prob(a_x);
  rep.rho_yfake = mean_prob(a_y);
  const Tensor v = plus(plus(mean_log_p(a_r), ops::scale(mean_log_1mp(a_x), 1.0 - alpha)),
                        ops::scale(mean_log_1mp(a_y), alpha));
  Tensor loss = ops::neg(v);
  rep.l_d = loss.item();
  return loss;
}

std::pair<Tensor, Tensor> tgs_gen_loss(double alpha, const Mlp& d, const Batch& b,
                                       const FakePairs& f, TripleGanSReport& rep) {
  Tensor g1 = ops::scale(mean_log_p(logits(d, f.x_fake, b.y_unpaired)), -(1.0 - alpha));
  Tensor g2 = ops::scale(mean_log_p(logits(d, b.x_unpaired, f.y_fake)), -alpha);
  rep.l_g1 = g1.item();
  rep.l_g2 = g2.item();
  return {g1, g2};
}

}  // namespace

const char* baseline_name(Baseline b) {
  return b == Baseline::delta_gan ? "delta-gan" : "triple-gan-s";
}

Baseline parse_baseline(const std::string& name) {
  if (name == "delta-gan") return Baseline::delta_gan;
  if (name == "triple-gan-s") return Baseline::triple_gan_s;
  throw ContractViolation("baseline must be delta-gan or triple-gan-s, got '" + name + "'");
}

void ModelConfig::validate() const {
  require(x_dim >= 1 && y_dim >= 1, "model: x_dim and y_dim must be >= 1");
  require(noise_dim >= 1, "model: noise_dim must be >= 1");
  for (auto w : gen_hidden) require(w >= 1, "model: generator widths must be >= 1");
  for (auto w : disc_hidden) require(w >= 1, "model: discriminator widths must be >= 1");
  if (kind == Baseline::triple_gan_s) TripleGanSConfig{alpha}.validate();
}

void TripleGanSConfig::validate() const {
  require(alpha > 0.0 && alpha < 1.0,
          "alpha must lie strictly inside (0, 1), got " + std::to_string(alpha));
}

std::vector<Tensor> TriGanModel::generator_params() const {
  auto p = gen_x.parameters();
  for (const auto& t : gen_y.parameters()) p.push_back(t);
  return p;
}

std::vector<Tensor> TriGanModel::discriminator_params() const {
  auto p = disc1.parameters();
  if (kind == Baseline::delta_gan)
    for (const auto& t : disc2.parameters()) p.push_back(t);
  return p;
}

std::vector<Mlp*> TriGanModel::discriminators() {
  if (kind == Baseline::delta_gan) return {&disc1, &disc2};
  return {&disc1};
}

TriGanModel assemble_model(Baseline kind, double alpha, std::size_t noise_dim, Mlp gen_x,
                           Mlp gen_y, Mlp disc1, Mlp disc2, const AdamConfig& gen_adam,
                           const AdamConfig& disc_adam) {
  if (kind == Baseline::triple_gan_s) TripleGanSConfig{alpha}.validate();
  const std::size_t dx = gen_x.spec().output_width;
  const std::size_t dy = gen_y.spec().output_width;
  require(gen_x.spec().input_width == dy + noise_dim, "G_x input must be y_dim + noise_dim");
  require(gen_y.spec().input_width == dx + noise_dim, "G_y input must be x_dim + noise_dim");
  require(disc1.spec().input_width == dx + dy && disc1.spec().output_width == 1,
          "D1 must map (x, y) to one probability");
  if (kind == Baseline::delta_gan)
    require(disc2.spec().input_width == dx + dy && disc2.spec().output_width == 1,
            "D2 must map (x, y) to one probability");

  TriGanModel m;
  m.kind = kind;
  m.alpha = alpha;
  m.noise_dim = noise_dim;
  m.gen_x = std::move(gen_x);
  m.gen_y = std::move(gen_y);
  m.disc1 = std::move(disc1);
  m.disc2 = std::move(disc2);
  for (Mlp* n : {&m.gen_x, &m.gen_y}) n->set_requires_grad(true);
  for (Mlp* n : m.discriminators()) n->set_requires_grad(true);

  auto gnames = m.gen_x.parameter_names("G_x");
  for (auto& s : m.gen_y.parameter_names("G_y")) gnames.push_back(s);
  auto dnames = m.disc1.parameter_names("D1");
  if (kind == Baseline::delta_gan)
    for (auto& s : m.disc2.parameter_names("D2")) dnames.push_back(s);
  m.gen_opt = Adam(gen_adam, m.generator_params(), gnames);
  m.disc_opt = Adam(disc_adam, m.discriminator_params(), dnames);
  return m;
}

TriGanModel make_model(const ModelConfig& c, std::uint64_t seed) {
  c.validate();
  MlpSpec gx{c.y_dim + c.noise_dim, c.gen_hidden, c.x_dim, c.hidden_activation,
             Activation::identity};
  MlpSpec gy{c.x_dim + c.noise_dim, c.gen_hidden, c.y_dim, c.hidden_activation,
             Activation::identity};
  MlpSpec d{c.x_dim + c.y_dim, c.disc_hidden, 1, c.hidden_activation, Activation::sigmoid};
  Mlp d2 = c.kind == Baseline::delta_gan ? mlp_init(d, splitmix64(seed + 4)) : Mlp();
  return assemble_model(c.kind, c.alpha, c.noise_dim, mlp_init(gx, splitmix64(seed + 1)),
                        mlp_init(gy, splitmix64(seed + 2)), mlp_init(d, splitmix64(seed + 3)),
                        std::move(d2), c.gen_adam, c.disc_adam);
}

TriGanModel TriGanModel::clone() const {
  return assemble_model(kind, alpha, noise_dim, gen_x.clone(), gen_y.clone(), disc1.clone(),
                        kind == Baseline::delta_gan ? disc2.clone() : Mlp(), gen_opt.config(),
                        disc_opt.config());
}

// ---------------------------------------------------------------------------

void Batch::validate() const {
  const std::size_t m = x_paired.rows();
  require(m > 0, "batch: empty");
  require(y_paired.rows() == m && x_unpaired.rows() == m && y_unpaired.rows() == m,
          "batch: paired and unpaired blocks must have equal row counts");
}

Tensor column_tensor(const std::vector<double>& v) { return Tensor({v.size(), 1}, v); }

Tensor noise_tensor(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(rows * cols);
  for (double& x : v) x = normal(rng);
  return Tensor({rows, cols}, std::move(v));
}

BatchSampler::BatchSampler(const PairDataset& dataset, std::size_t batch_size)
    : dataset_(&dataset), paired_(dataset.paired_indices()), batch_size_(batch_size) {
  require(batch_size >= 1, "batch size must be >= 1");
  require(!dataset.rows.empty(), "dataset is empty");
  require(!paired_.empty(),
          "dataset has no paired rows: the real-pair term needs paired-fraction > 0");
}

Batch BatchSampler::next(std::mt19937_64& rng) const {
  const auto& rows = dataset_->rows;
  std::uniform_int_distribution<std::size_t> pick_paired(0, paired_.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_any(0, rows.size() - 1);
  std::vector<double> xp(batch_size_), yp(batch_size_), xu(batch_size_), yu(batch_size_);
  for (std::size_t i = 0; i < batch_size_; ++i) {
    const PairRow& r = rows[paired_[pick_paired(rng)]];
    xp[i] = r.x;
    yp[i] = r.y;
  }
  for (std::size_t i = 0; i < batch_size_; ++i) xu[i] = rows[pick_any(rng)].x;
  for (std::size_t i = 0; i < batch_size_; ++i) yu[i] = rows[pick_any(rng)].y;
  return {column_tensor(xp), column_tensor(yp), column_tensor(xu), column_tensor(yu)};
}

FakePairs sample_fake_pairs(const TriGanModel& model, const Tensor& x_unpaired,
                            const Tensor& y_unpaired, std::mt19937_64& rng) {
  require(x_unpaired.rows() == y_unpaired.rows(),
          "sample_fake_pairs: unpaired blocks differ in row count");
  const std::size_t m = x_unpaired.rows();
  const Tensor zx = noise_tensor(m, model.noise_dim, rng);
  const Tensor zy = noise_tensor(m, model.noise_dim, rng);
  return {model.gen_x.forward(ops::concat_cols(y_unpaired, zx)),
          model.gen_y.forward(ops::concat_cols(x_unpaired, zy))};
}

LossTerms discriminator_losses(const TriGanModel& model, const Batch& batch,
                               const FakePairs& fakes) {
  require_delta(model);
  batch.validate();
  const Tensor xf = fakes.x_fake.detach();
  const Tensor yf = fakes.y_fake.detach();
  const Tensor a11 = logits(model.disc1, batch.x_paired, batch.y_paired);
  const Tensor a12 = logits(model.disc1, xf, batch.y_unpaired);
  const Tensor a13 = logits(model.disc1, batch.x_unpaired, yf);
  const Tensor a21 = logits(model.disc2, xf, batch.y_unpaired);
  const Tensor a22 = logits(model.disc2, batch.x_unpaired, yf);

  LossTerms out;
  out.first = ops::neg(plus(plus(mean_log_p(a11), mean_log_1mp(a12)), mean_log_1mp(a13)));
  out.second = ops::neg(plus(mean_log_p(a21), mean_log_1mp(a22)));
  auto& r = out.report;
  r.l_d1 = out.first.item();
  r.l_d2 = out.second.item();
  r.rho11 = mean_prob(a11);
  r.rho12 = mean_prob(a12);
  r.rho13 = mean_prob(a13);
  r.rho21 = mean_prob(a21);
  r.rho22 = mean_prob(a22);
  if (!std::isfinite(r.l_d1) || !std::isfinite(r.l_d2))
    throw NumericError("discriminator loss is not finite");
  return out;
}

LossTerms generator_losses(const TriGanModel& model, const Batch& batch, const FakePairs& fakes) {
  require_delta(model);
  batch.validate();
  const Tensor a12 = logits(model.disc1, fakes.x_fake, batch.y_unpaired);
  const Tensor a21 = logits(model.disc2, fakes.x_fake, batch.y_unpaired);
  const Tensor a13 = logits(model.disc1, batch.x_unpaired, fakes.y_fake);
  const Tensor a22 = logits(model.disc2, batch.x_unpaired, fakes.y_fake);

  LossTerms out;
  out.first = ops::neg(plus(mean_log_p(a12), mean_log_1mp(a21)));
  out.second = ops::neg(plus(mean_log_p(a13), mean_log_p(a22)));
  auto& r = out.report;
  r.l_g1 = out.first.item();
  r.l_g2 = out.second.item();
  r.rho12 = mean_prob(a12);
  r.rho13 = mean_prob(a13);
  r.rho21 = mean_prob(a21);
  r.rho22 = mean_prob(a22);
  if (!std::isfinite(r.l_g1) || !std::isfinite(r.l_g2))
    throw NumericError("generator loss is not finite");
  return out;
}

LossReport discriminator_step(TriGanModel& model, const Batch& batch, std::mt19937_64& rng) {
  require_delta(model);
  Tape tape;
  TapeScope scope(tape);
  FakePairs fakes;
  {
    NoGradScope no_grad;
    fakes = sample_fake_pairs(model, batch.x_unpaired, batch.y_unpaired, rng);
  }
  zero_all(model.discriminator_params());
  LossTerms d = discriminator_losses(model, batch, fakes);
  tape.backward(plus(d.first, d.second));
  model.disc_opt.step();
  zero_all(model.discriminator_params());
  return d.report;
}

LossReport train_step(TriGanModel& model, const Batch& batch, std::mt19937_64& rng) {
  require_delta(model);
  Tape tape;
  TapeScope scope(tape);
  const FakePairs fakes = sample_fake_pairs(model, batch.x_unpaired, batch.y_unpaired, rng);

  zero_all(model.discriminator_params());
  LossTerms d = discriminator_losses(model, batch, fakes);
  tape.backward(plus(d.first, d.second));
  model.disc_opt.step();
  zero_all(model.discriminator_params());

  LossReport report = d.report;
  {
    FreezeGuard frozen(model.discriminators());
    zero_all(model.generator_params());
    LossTerms g = generator_losses(model, batch, fakes);
    tape.backward(plus(g.first, g.second));
    report.l_g1 = g.report.l_g1;
    report.l_g2 = g.report.l_g2;
  }
  model.gen_opt.step();
  zero_all(model.generator_params());
  return report;
}

double value_function_estimate(const TriGanModel& model, const Batch& batch,
                               std::mt19937_64& rng) {
  batch.validate();
  NoGradScope no_grad;
  const FakePairs f = sample_fake_pairs(model, batch.x_unpaired, batch.y_unpaired, rng);
  const Tensor a_real = logits(model.disc1, batch.x_paired, batch.y_paired);
  const Tensor a_x = logits(model.disc1, f.x_fake, batch.y_unpaired);
  const Tensor a_y = logits(model.disc1, batch.x_unpaired, f.y_fake);
  if (model.kind == Baseline::triple_gan_s) {
    return mean_log_p(a_real).item() + (1.0 - model.alpha) * mean_log_1mp(a_x).item() +
           model.alpha * mean_log_1mp(a_y).item();
  }
  const Tensor b_x = logits(model.disc2, f.x_fake, batch.y_unpaired);
  const Tensor b_y = logits(model.disc2, batch.x_unpaired, f.y_fake);
  return mean_log_p(a_real).item() + mean_log_1mp(a_x).item() + mean_log_p(b_x).item() +
         mean_log_1mp(a_y).item() + mean_log_1mp(b_y).item();
}

// ---------------------------------------------------------------------------

TripleGanSTerms triple_gan_s_losses(const TripleGanSConfig& config, const TriGanModel& model,
                                    const Batch& batch, const FakePairs& fakes) {
  config.validate();
  batch.validate();
  TripleGanSTerms out;
  out.disc = tgs_disc_loss(config.alpha, model.disc1, batch, fakes.x_fake.detach(),
                           fakes.y_fake.detach(), out.report);
  std::tie(out.gen1, out.gen2) = tgs_gen_loss(config.alpha, model.disc1, batch, fakes, out.report);
  return out;
}

TripleGanSReport triple_gan_s_train_step(TriGanModel& model, const Batch& batch,
                                         std::mt19937_64& rng) {
  require_triple(model);
  batch.validate();
  Tape tape;
  TapeScope scope(tape);
  const FakePairs fakes = sample_fake_pairs(model, batch.x_unpaired, batch.y_unpaired, rng);

  TripleGanSReport report;
  zero_all(model.discriminator_params());
  const Tensor ld = tgs_disc_loss(model.alpha, model.disc1, batch, fakes.x_fake.detach(),
                                  fakes.y_fake.detach(), report);
  if (!std::isfinite(report.l_d)) throw NumericError("discriminator loss is not finite");
  tape.backward(ld);
  model.disc_opt.step();
  zero_all(model.discriminator_params());

  {
    FreezeGuard frozen(model.discriminators());
    zero_all(model.generator_params());
    auto [g1, g2] = tgs_gen_loss(model.alpha, model.disc1, batch, fakes, report);
    if (!std::isfinite(report.l_g1) || !std::isfinite(report.l_g2))
      throw NumericError("generator loss is not finite");
    tape.backward(plus(g1, g2));
  }
  model.gen_opt.step();
  zero_all(model.generator_params());
  return report;
}

// ---------------------------------------------------------------------------

void save_checkpoint(const TriGanModel& model, const std::filesystem::path& path) {
  nlohmann::json j{{"format", "trigan-checkpoint"},
                   {"version", kCheckpointVersion},
                   {"kind", baseline_name(model.kind)},
                   {"alpha", model.alpha},
                   {"noise_dim", model.noise_dim},
                   {"gen_x", to_json(model.gen_x)},
                   {"gen_y", to_json(model.gen_y)},
                   {"disc1", to_json(model.disc1)}};
  if (model.kind == Baseline::delta_gan) j["disc2"] = to_json(model.disc2);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << j.dump();
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

TriGanModel load_checkpoint(const std::filesystem::path& path, const AdamConfig& gen_adam,
                            const AdamConfig& disc_adam) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "trigan-checkpoint")
    throw ParseError(path.string() + ": not a trigan checkpoint");
  if (j.value("version", 0) != kCheckpointVersion)
    throw ParseError(path.string() + ": unsupported checkpoint version");
  try {
    const Baseline kind = parse_baseline(j.at("kind").get<std::string>());
    return assemble_model(kind, j.at("alpha").get<double>(), j.at("noise_dim").get<std::size_t>(),
                          mlp_from_json(j.at("gen_x")), mlp_from_json(j.at("gen_y")),
                          mlp_from_json(j.at("disc1")),
                          kind == Baseline::delta_gan ? mlp_from_json(j.at("disc2")) : Mlp(),
                          gen_adam, disc_adam);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace tgan
