#include "trigan/commands.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "trigan/errors.hpp"
#include "trigan/mixture.hpp"
#include "trigan/mmd.hpp"
#include "trigan/ops.hpp"
#include "trigan/tape.hpp"

namespace tgan {

namespace fs = std::filesystem;

namespace {

// Independent RNG streams derived from the run seed.
enum class Stream : std::uint64_t { train = 0x7472, eval = 0x6576, mmd = 0x6d6d, value = 0x7666 };

std::uint64_t stream_seed(std::uint64_t seed, Stream s) {
  std::uint64_t x = seed ^ (static_cast<std::uint64_t>(s) << 32);
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::size_t kSampleChunk = 4096;

std::vector<std::size_t> permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

std::vector<Point2> subsample(const std::vector<Point2>& pts, std::size_t n,
                              std::mt19937_64& rng) {
  if (pts.size() <= n) return pts;
  const auto perm = permutation(pts.size(), rng);
  std::vector<Point2> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = pts[perm[i]];
  return out;
}

// Real pairs for the paired term and independently shuffled marginals for the
// fake terms, all drawn from the full dataset.
Batch evaluation_batch(const PairDataset& data, std::size_t n, std::mt19937_64& rng) {
  n = std::min(n, data.size());
  const auto pa = permutation(data.size(), rng);
  const auto px = permutation(data.size(), rng);
  const auto py = permutation(data.size(), rng);
  std::vector<double> xp(n), yp(n), xu(n), yu(n);
  for (std::size_t i = 0; i < n; ++i) {
    xp[i] = data.rows[pa[i]].x;
    yp[i] = data.rows[pa[i]].y;
    xu[i] = data.rows[px[i]].x;
    yu[i] = data.rows[py[i]].y;
  }
  return {column_tensor(xp), column_tensor(yp), column_tensor(xu), column_tensor(yu)};
}

void write_points_csv(const std::vector<Point2>& pts, const fs::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  std::fputs("x,y\n", f);
  for (const auto& p : pts) std::fprintf(f, "%.17g,%.17g\n", p[0], p[1]);
  if (std::fclose(f) != 0) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const nlohmann::json& j, const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << j.dump(2) << "\n";
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

void create_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
}

PairDataset load_training_data(const ExperimentConfig& config, bool resplit) {
  PairDataset data = read_dataset_csv(config.dataset_path());
  if (resplit) data = split_semi_supervised(data, config.paired_fraction, config.seed);
  return data;
}

}  // namespace

GeneratedSamples generate_samples(const TriGanModel& model, const PairDataset& data,
                                  std::size_t n, std::uint64_t seed) {
  require(!data.rows.empty(), "generate_samples: dataset is empty");
  std::mt19937_64 rng(seed);
  const auto order = permutation(data.size(), rng);
  NoGradScope no_grad;
  GeneratedSamples out;
  out.px.reserve(n);
  out.py.reserve(n);
  for (std::size_t start = 0; start < n; start += kSampleChunk) {
    const std::size_t m = std::min(kSampleChunk, n - start);
    std::vector<double> xs(m), ys(m);
    for (std::size_t i = 0; i < m; ++i) {
      const PairRow& r = data.rows[order[(start + i) % order.size()]];
      xs[i] = r.x;
      ys[i] = r.y;
    }
    const FakePairs f = sample_fake_pairs(model, column_tensor(xs), column_tensor(ys), rng);
    for (std::size_t i = 0; i < m; ++i) {
      out.px.push_back({f.x_fake.values()[i], ys[i]});
      out.py.push_back({xs[i], f.y_fake.values()[i]});
    }
  }
  return out;
}

GridDensity reference_grid(const ExperimentConfig& config, const PairDataset& data) {
  if (config.dataset.empty())
    return mixture_grid(config.mixture, config.grid_range, config.grid_range,
                        config.grid_resolution);
  const auto pts = data.points();
  return histogram2d(pts, config.grid_range, config.grid_range, config.grid_resolution);
}

EvalReport evaluate_model(const TriGanModel& model, const PairDataset& data,
                          const ExperimentConfig& config, GeneratedSamples* keep) {
  config.validate();
  GeneratedSamples s = generate_samples(model, data, config.n_eval, stream_seed(config.seed, Stream::eval));
  const GridDensity truth = reference_grid(config, data);
  const GridDensity gpx =
      histogram2d(s.px, config.grid_range, config.grid_range, config.grid_resolution);
  const GridDensity gpy =
      histogram2d(s.py, config.grid_range, config.grid_range, config.grid_resolution);

  EvalReport r;
  r.grid_jsd_px = jsd(truth, gpx);
  r.grid_jsd_py = jsd(truth, gpy);
  r.grid_jsd_mix = jsd(truth, mix(gpx, gpy));

  std::mt19937_64 rng(stream_seed(config.seed, Stream::mmd));
  const auto real = subsample(data.points(), config.mmd_points, rng);
  const auto fx = subsample(s.px, config.mmd_points, rng);
  const auto fy = subsample(s.py, config.mmd_points, rng);
  r.mmd2_px = mmd2(real, fx);
  r.mmd2_py = mmd2(real, fy);

  std::mt19937_64 vrng(stream_seed(config.seed, Stream::value));
  const Batch b = evaluation_batch(data, config.mmd_points, vrng);
  r.value_estimate = value_function_estimate(model, b, vrng);

  if (keep) *keep = std::move(s);
  return r;
}

nlohmann::json to_json(const EvalReport& r) {
  return {{"grid-jsd-px", r.grid_jsd_px},   {"grid-jsd-py", r.grid_jsd_py},
          {"grid-jsd-mix", r.grid_jsd_mix}, {"mmd2-px", r.mmd2_px},
          {"mmd2-py", r.mmd2_py},           {"value-estimate", r.value_estimate}};
}

std::string metrics_header(Baseline kind) {
  return kind == Baseline::delta_gan ? "step,l_d1,l_d2,l_g1,l_g2,v_estimate"
                                     : "step,l_d,l_g1,l_g2,v_estimate";
}

std::string metrics_row(Baseline kind, const StepMetrics& m) {
  char buf[256];
  if (kind == Baseline::delta_gan)
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g", m.step, m.l_d1, m.l_d2,
                  m.l_g1, m.l_g2, m.v_estimate);
  else
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g", m.step, m.l_d1, m.l_g1, m.l_g2,
                  m.v_estimate);
  return buf;
}

TriGanModel train_model(const ExperimentConfig& config, const PairDataset& data,
                        const TrainHooks& hooks) {
  config.validate();
  require(config.model.kind == Baseline::delta_gan || config.disc_steps == 1,
          "disc_steps > 1 is only supported for delta-gan");
  TriGanModel model = make_model(config.model, config.seed);
  const BatchSampler sampler(data, config.batch_size);
  std::mt19937_64 rng(stream_seed(config.seed, Stream::train));

  for (std::size_t step = 1; step <= config.steps; ++step) {
    StepMetrics m;
    m.step = step;
    if (config.model.kind == Baseline::delta_gan) {
      for (std::size_t k = 1; k < config.disc_steps; ++k)
        discriminator_step(model, sampler.next(rng), rng);
      const LossReport r = train_step(model, sampler.next(rng), rng);
      m.l_d1 = r.l_d1;
      m.l_d2 = r.l_d2;
      m.l_g1 = r.l_g1;
      m.l_g2 = r.l_g2;
      m.v_estimate = -(r.l_d1 + r.l_d2);
    } else {
      const TripleGanSReport r = triple_gan_s_train_step(model, sampler.next(rng), rng);
      m.l_d1 = r.l_d;
      m.l_g1 = r.l_g1;
      m.l_g2 = r.l_g2;
      m.v_estimate = -r.l_d;
    }
    if (hooks.on_step) hooks.on_step(m);
    if (hooks.on_eval && step % config.eval_every == 0) hooks.on_eval(step, model);
  }
  return model;
}

void cmd_gen_data(const ExperimentConfig& config) {
  config.validate();
  const fs::path out(config.out);
  create_out_dir(out);
  PairDataset data = sample_mixture(config.mixture, config.n_per_component, config.seed);
  data = split_semi_supervised(data, config.paired_fraction, config.seed);
  const fs::path csv = config.dataset_path();
  if (csv.has_parent_path()) create_out_dir(csv.parent_path());
  write_dataset_csv(data, csv);
  write_json(to_json(config.mixture), out / "mixture.json");
  save_config(config, out / "config.json");
}

void cmd_train(const ExperimentConfig& config, bool resplit) {
  config.validate();
  const PairDataset data = load_training_data(config, resplit);
  const fs::path out(config.out);
  create_out_dir(out);
  save_config(config, out / "config.json");

  const fs::path metrics_path = out / "metrics.csv";
  std::FILE* metrics = std::fopen(metrics_path.string().c_str(), "wb");
  if (!metrics) throw std::runtime_error("cannot open " + metrics_path.string() + " for writing");
  struct Closer {
    std::FILE* f;
    ~Closer() {
      if (f) std::fclose(f);
    }
  } closer{metrics};
  std::fprintf(metrics, "%s\n", metrics_header(config.model.kind).c_str());

  const fs::path last_good = out / "checkpoint_last_good.json";
  save_checkpoint(make_model(config.model, config.seed), last_good);

  TrainHooks hooks;
  hooks.on_step = [&](const StepMetrics& m) {
    std::fprintf(metrics, "%s\n", metrics_row(config.model.kind, m).c_str());
  };
  hooks.on_eval = [&](std::size_t step, const TriGanModel& model) {
    std::fflush(metrics);
    const EvalReport r = evaluate_model(model, data, config);
    nlohmann::json j = to_json(r);
    j["step"] = step;
    write_json(j, out / ("eval_step" + std::to_string(step) + ".json"));
    save_checkpoint(model, last_good);
  };

  TriGanModel model;
  try {
    model = train_model(config, data, hooks);
  } catch (const NumericError& e) {
    std::fflush(metrics);
    throw DivergenceError(std::string("training diverged: ") + e.what(), last_good);
  }
  if (std::fflush(metrics) != 0) throw std::runtime_error("write failed: " + metrics_path.string());
  save_checkpoint(model, out / "checkpoint.json");
}

EvalReport cmd_eval(const ExperimentConfig& config, const fs::path& checkpoint) {
  config.validate();
  TriGanModel model = load_checkpoint(checkpoint, config.model.gen_adam, config.model.disc_adam);
  {
    const TriGanModel expected = make_model(config.model, 0);
    const bool match = model.kind == expected.kind &&
                       model.gen_x.spec() == expected.gen_x.spec() &&
                       model.gen_y.spec() == expected.gen_y.spec() &&
                       model.disc1.spec() == expected.disc1.spec() &&
                       model.disc2.spec() == expected.disc2.spec();
    if (!match)
      throw ParseError(checkpoint.string() +
                       ": network shapes do not match the configured model (baseline, "
                       "noise width, hidden widths)");
  }
  const PairDataset data = read_dataset_csv(config.dataset_path());
  const fs::path out(config.out);
  create_out_dir(out);

  GeneratedSamples s;
  const EvalReport r = evaluate_model(model, data, config, &s);
  write_points_csv(s.px, out / "samples_px.csv");
  write_points_csv(s.py, out / "samples_py.csv");
  write_points_csv(data.points(), out / "samples_real.csv");
  nlohmann::json j = to_json(r);
  j["checkpoint"] = checkpoint.string();
  j["config"] = to_json(config);
  write_json(j, out / "eval.json");
  return r;
}

}  // namespace tgan
