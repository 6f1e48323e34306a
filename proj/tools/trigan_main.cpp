// Command-line front end: gen-data, train and eval subcommands.
//
// Effective config = built-in defaults, overridden by --config FILE, overridden
// by explicit flags. Exit codes: 0 success, 1 I/O or load failure, 2 invalid
// configuration, 3 numeric failure during training.

#include <charconv>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "trigan/commands.hpp"
#include "trigan/config.hpp"
#include "trigan/errors.hpp"

namespace {

using tgan::ExperimentConfig;

constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNumeric = 3;

struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> baseline;
  std::optional<double> alpha;
  std::optional<double> paired_fraction;
  std::optional<std::size_t> steps;
  std::optional<std::string> dataset;
  std::optional<std::size_t> n_per_component;
  std::optional<std::size_t> n_eval;
  std::optional<std::size_t> eval_every;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> hidden;
  std::optional<std::size_t> depth;
  std::optional<double> lr;
  std::optional<std::string> seeds;
  std::string checkpoint;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file (flags override its fields)");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--baseline", f.baseline, "Model: delta-gan or triple-gan-s")
      ->check(CLI::IsMember({"delta-gan", "triple-gan-s"}));
  cmd->add_option("--alpha", f.alpha, "Triple GAN-s generator weight, in (0, 1)");
  cmd->add_option("--paired-fraction", f.paired_fraction, "Fraction of rows marked paired");
  cmd->add_option("--steps", f.steps, "Training steps");
  cmd->add_option("--dataset", f.dataset, "Dataset CSV (default: <out>/dataset.csv)");
  cmd->add_option("--n-per-component", f.n_per_component, "Samples per mixture component");
  cmd->add_option("--n-eval", f.n_eval, "Generated pairs per generator at evaluation");
  cmd->add_option("--eval-every", f.eval_every, "Evaluation interval in steps");
  cmd->add_option("--batch-size", f.batch_size, "Minibatch size M");
  cmd->add_option("--hidden", f.hidden, "Width of every hidden layer (all networks)");
  cmd->add_option("--depth", f.depth, "Number of hidden layers (all networks)");
  cmd->add_option("--lr", f.lr, "Adam learning rate (all networks)");
  cmd->add_option("--seeds", f.seeds, "Seed sweep a..b; run k writes to <out>/seed_<k>");
}

ExperimentConfig effective_config(const Flags& f) {
  ExperimentConfig c = f.config ? tgan::load_config(*f.config) : ExperimentConfig{};
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.baseline) c.model.kind = tgan::parse_baseline(*f.baseline);
  if (f.alpha) c.model.alpha = *f.alpha;
  if (f.paired_fraction) c.paired_fraction = *f.paired_fraction;
  if (f.steps) c.steps = *f.steps;
  if (f.dataset) c.dataset = *f.dataset;
  if (f.n_per_component) c.n_per_component = *f.n_per_component;
  if (f.n_eval) c.n_eval = *f.n_eval;
  if (f.eval_every) c.eval_every = *f.eval_every;
  if (f.batch_size) c.batch_size = *f.batch_size;
  if (f.hidden || f.depth) {
    const std::size_t width = f.hidden ? *f.hidden : c.model.gen_hidden.at(0);
    const std::size_t depth = f.depth ? *f.depth : c.model.gen_hidden.size();
    c.model.gen_hidden.assign(depth, width);
    c.model.disc_hidden.assign(depth, width);
  }
  if (f.lr) {
    c.model.gen_adam.lr = *f.lr;
    c.model.disc_adam.lr = *f.lr;
  }
  return c;
}

std::vector<std::uint64_t> parse_seed_range(const std::string& s) {
  const auto dots = s.find("..");
  tgan::require(dots != std::string::npos, "--seeds must look like a..b, got '" + s + "'");
  std::uint64_t a = 0, b = 0;
  const auto ra = std::from_chars(s.data(), s.data() + dots, a);
  const auto rb = std::from_chars(s.data() + dots + 2, s.data() + s.size(), b);
  tgan::require(ra.ec == std::errc() && ra.ptr == s.data() + dots && rb.ec == std::errc() &&
                    rb.ptr == s.data() + s.size() && a <= b,
                "--seeds must look like a..b with a <= b, got '" + s + "'");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t k = a; k <= b; ++k) seeds.push_back(k);
  return seeds;
}

// Runs one command and maps failures to exit codes.
int guarded(const std::string& tag, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const tgan::ContractViolation& e) {
    std::cerr << tag << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const tgan::DivergenceError& e) {
    std::cerr << tag << e.what() << "\nlast good checkpoint: " << e.last_good().string()
              << "\n";
    return kExitNumeric;
  } catch (const tgan::NumericError& e) {
    std::cerr << tag << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << tag << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

void run_command(const std::string& name, const ExperimentConfig& c, const Flags& f) {
  if (name == "gen-data") {
    tgan::cmd_gen_data(c);
    std::printf("wrote %s\n", c.dataset_path().string().c_str());
  } else if (name == "train") {
    tgan::cmd_train(c, f.paired_fraction.has_value());
    std::printf("wrote %s\n", (std::filesystem::path(c.out) / "checkpoint.json").string().c_str());
  } else {
    const std::filesystem::path ckpt = f.checkpoint.empty()
                                           ? std::filesystem::path(c.out) / "checkpoint.json"
                                           : std::filesystem::path(f.checkpoint);
    const tgan::EvalReport r = tgan::cmd_eval(c, ckpt);
    std::printf("%s\n", tgan::to_json(r).dump(2).c_str());
  }
}

int dispatch(const std::string& name, const Flags& f) {
  ExperimentConfig base;
  std::vector<std::uint64_t> seeds;
  if (int rc = guarded("", [&] {
        base = effective_config(f);
        if (f.seeds) seeds = parse_seed_range(*f.seeds);
      });
      rc != 0)
    return rc;

  if (seeds.empty()) return guarded("", [&] { run_command(name, base, f); });

  // Sweep: each seed runs on its own thread with its own config and output
  // subdirectory; nothing is shared between runs.
  std::vector<int> codes(seeds.size(), 0);
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    workers.emplace_back([&, i] {
      ExperimentConfig c = base;
      c.seed = seeds[i];
      c.out = (std::filesystem::path(base.out) / ("seed_" + std::to_string(seeds[i]))).string();
      codes[i] = guarded("[seed " + std::to_string(seeds[i]) + "] ",
                         [&] { run_command(name, c, f); });
    });
  }
  for (auto& w : workers) w.join();
  int worst = 0;
  for (int rc : codes) worst = std::max(worst, rc);
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Triangle GAN: joint-distribution matching on paired and unpaired data"};
  app.require_subcommand(1);

  Flags gen_flags, train_flags, eval_flags;
  CLI::App* gen = app.add_subcommand("gen-data", "Sample the Gaussian-mixture dataset");
  add_common(gen, gen_flags);
  CLI::App* train = app.add_subcommand("train", "Train a model; writes metrics and checkpoints");
  add_common(train, train_flags);
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint; writes samples and report");
  add_common(eval, eval_flags);
  eval->add_option("--checkpoint", eval_flags.checkpoint,
                   "Checkpoint to evaluate (default: <out>/checkpoint.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  if (gen->parsed()) return dispatch("gen-data", gen_flags);
  if (train->parsed()) return dispatch("train", train_flags);
  return dispatch("eval", eval_flags);
}
