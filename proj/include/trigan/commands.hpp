#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "trigan/config.hpp"
#include "trigan/dataset.hpp"
#include "trigan/game.hpp"
#include "trigan/grid.hpp"

namespace tgan {

struct EvalReport {
  double grid_jsd_px = 0.0;
  double grid_jsd_py = 0.0;
  double grid_jsd_mix = 0.0;  // equal mixture of the two generated joints
  double mmd2_px = 0.0;
  double mmd2_py = 0.0;
  double value_estimate = 0.0;
};

struct GeneratedSamples {
  std::vector<Point2> px;  // (G_x(y, z), y)
  std::vector<Point2> py;  // (x, G_y(x, z))
};

// n pairs from each generated joint, conditioning on dataset rows in a
// seeded random order (cycled when n exceeds the dataset).
GeneratedSamples generate_samples(const TriGanModel& model, const PairDataset& data,
                                  std::size_t n, std::uint64_t seed);

// Reference joint on the evaluation grid: the exact mixture when the config
// generates its own data, otherwise the dataset histogram.
GridDensity reference_grid(const ExperimentConfig& config, const PairDataset& data);

EvalReport evaluate_model(const TriGanModel& model, const PairDataset& data,
                          const ExperimentConfig& config, GeneratedSamples* keep = nullptr);

nlohmann::json to_json(const EvalReport& r);

// One training-log row. For triple_gan_s, l_d1 holds the single
// discriminator loss and l_d2 is unused.
struct StepMetrics {
  std::size_t step = 0;
  double l_d1 = 0.0;
  double l_d2 = 0.0;
  double l_g1 = 0.0;
  double l_g2 = 0.0;
  double v_estimate = 0.0;  // value function on the step's batch, pre-update
};

std::string metrics_header(Baseline kind);
std::string metrics_row(Baseline kind, const StepMetrics& m);

struct TrainHooks {
  std::function<void(const StepMetrics&)> on_step;
  std::function<void(std::size_t step, const TriGanModel&)> on_eval;
};

// Runs config.steps alternating updates on `data` from a model initialized
// with config.seed. Deterministic for a fixed config and dataset.
TriGanModel train_model(const ExperimentConfig& config, const PairDataset& data,
                        const TrainHooks& hooks = {});

// CLI commands. Each validates the config first (ContractViolation on bad
// fields) and writes into config.out.
void cmd_gen_data(const ExperimentConfig& config);
// `resplit` re-marks paired rows with config.paired_fraction instead of using
// the dataset's own paired column.
void cmd_train(const ExperimentConfig& config, bool resplit);
EvalReport cmd_eval(const ExperimentConfig& config, const std::filesystem::path& checkpoint);

// Thrown by cmd_train on divergence; carries the last checkpoint known good.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::filesystem::path last_good)
      : std::runtime_error(what), last_good_(std::move(last_good)) {}
  const std::filesystem::path& last_good() const { return last_good_; }

 private:
  std::filesystem::path last_good_;
};

}  // namespace tgan
