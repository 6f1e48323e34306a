#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "trigan/game.hpp"
#include "trigan/grid.hpp"
#include "trigan/mixture.hpp"

namespace tgan {

// Everything one run needs. Serialized as a single JSON document; missing
// fields keep their defaults, and the echo written by each command reloads to
// an identical config.
struct ExperimentConfig {
  GaussianMixtureSpec mixture = GaussianMixtureSpec::toy();
  std::string dataset;  // CSV path; empty means <out>/dataset.csv
  std::size_t n_per_component = 5000;
  double paired_fraction = 1.0;

  ModelConfig model;
  std::size_t batch_size = 128;
  std::size_t steps = 20000;
  std::size_t disc_steps = 1;  // discriminator updates per generator update
  std::size_t eval_every = 2000;
  std::size_t n_eval = 50000;
  std::size_t mmd_points = 5000;

  Interval grid_range = kToyRange;
  std::size_t grid_resolution = kToyResolution;

  std::uint64_t seed = 0;
  std::string out = "runs/default";

  // Throws ContractViolation naming the offending field.
  void validate() const;
  std::filesystem::path dataset_path() const;
  bool operator==(const ExperimentConfig&) const;
};

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& c, const std::filesystem::path& path);

}  // namespace tgan
