#include "trigan/config.hpp"

#include <fstream>

#include "trigan/errors.hpp"

namespace tgan {

namespace {

nlohmann::json adam_json(const AdamConfig& a) {
  return {{"lr", a.lr}, {"beta1", a.beta1}, {"beta2", a.beta2}, {"eps", a.eps}};
}

AdamConfig adam_from(const nlohmann::json& j, AdamConfig a) {
  a.lr = j.value("lr", a.lr);
  a.beta1 = j.value("beta1", a.beta1);
  a.beta2 = j.value("beta2", a.beta2);
  a.eps = j.value("eps", a.eps);
  return a;
}

}  // namespace

void ExperimentConfig::validate() const {
  mixture.validate();
  require(n_per_component >= 1, "n_per_component must be >= 1");
  require(paired_fraction >= 0.0 && paired_fraction <= 1.0,
          "paired_fraction must lie in [0, 1], got " + std::to_string(paired_fraction));
  model.validate();
  require(model.x_dim == 1 && model.y_dim == 1, "model: x_dim and y_dim must be 1 for pair data");
  for (const AdamConfig* a : {&model.gen_adam, &model.disc_adam}) {
    require(a->lr >= 0.0, "optimizer.lr must be >= 0");
    require(a->beta1 >= 0.0 && a->beta1 < 1.0, "optimizer.beta1 must lie in [0, 1)");
    require(a->beta2 >= 0.0 && a->beta2 < 1.0, "optimizer.beta2 must lie in [0, 1)");
    require(a->eps > 0.0, "optimizer.eps must be positive");
  }
  require(batch_size >= 1, "batch_size must be >= 1");
  require(disc_steps >= 1, "disc_steps must be >= 1");
  require(eval_every >= 1, "eval_every must be >= 1");
  require(n_eval >= 1, "n_eval must be >= 1");
  require(mmd_points >= 2, "mmd_points must be >= 2");
  require(grid_range.hi > grid_range.lo, "grid.range must be increasing");
  require(grid_resolution >= 2, "grid.resolution must be >= 2");
  require(!out.empty(), "out must not be empty");
}

std::filesystem::path ExperimentConfig::dataset_path() const {
  return dataset.empty() ? std::filesystem::path(out) / "dataset.csv"
                         : std::filesystem::path(dataset);
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return to_json(*this) == to_json(o);
}

nlohmann::json to_json(const ExperimentConfig& c) {
  const auto& m = c.model;
  return {
      {"mixture", to_json(c.mixture)},
      {"dataset", c.dataset},
      {"n_per_component", c.n_per_component},
      {"paired_fraction", c.paired_fraction},
      {"baseline", baseline_name(m.kind)},
      {"alpha", m.alpha},
      {"model",
       {{"noise_dim", m.noise_dim},
        {"gen_hidden", m.gen_hidden},
        {"disc_hidden", m.disc_hidden},
        {"hidden_activation", activation_name(m.hidden_activation)}}},
      {"optimizer", {{"gen", adam_json(m.gen_adam)}, {"disc", adam_json(m.disc_adam)}}},
      {"batch_size", c.batch_size},
      {"steps", c.steps},
      {"disc_steps", c.disc_steps},
      {"eval_every", c.eval_every},
      {"n_eval", c.n_eval},
      {"mmd_points", c.mmd_points},
      {"grid", {{"range", {c.grid_range.lo, c.grid_range.hi}}, {"resolution", c.grid_resolution}}},
      {"seed", c.seed},
      {"out", c.out},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("mixture")) c.mixture = mixture_from_json(j.at("mixture"));
    c.dataset = j.value("dataset", c.dataset);
    c.n_per_component = j.value("n_per_component", c.n_per_component);
    c.paired_fraction = j.value("paired_fraction", c.paired_fraction);
    if (j.contains("baseline")) c.model.kind = parse_baseline(j.at("baseline").get<std::string>());
    c.model.alpha = j.value("alpha", c.model.alpha);
    if (j.contains("model")) {
      const auto& m = j.at("model");
      c.model.noise_dim = m.value("noise_dim", c.model.noise_dim);
      c.model.gen_hidden = m.value("gen_hidden", c.model.gen_hidden);
      c.model.disc_hidden = m.value("disc_hidden", c.model.disc_hidden);
      if (m.contains("hidden_activation"))
        c.model.hidden_activation = parse_activation(m.at("hidden_activation").get<std::string>());
    }
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      if (o.contains("gen")) c.model.gen_adam = adam_from(o.at("gen"), c.model.gen_adam);
      if (o.contains("disc")) c.model.disc_adam = adam_from(o.at("disc"), c.model.disc_adam);
    }
    c.batch_size = j.value("batch_size", c.batch_size);
    c.steps = j.value("steps", c.steps);
    c.disc_steps = j.value("disc_steps", c.disc_steps);
    c.eval_every = j.value("eval_every", c.eval_every);
    c.n_eval = j.value("n_eval", c.n_eval);
    c.mmd_points = j.value("mmd_points", c.mmd_points);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.contains("range")) {
        const auto r = g.at("range").get<std::vector<double>>();
        require(r.size() == 2, "grid.range must have two entries");
        c.grid_range = {r[0], r[1]};
      }
      c.grid_resolution = g.value("resolution", c.grid_resolution);
    }
    c.seed = j.value("seed", c.seed);
    c.out = j.value("out", c.out);
  } catch (const nlohmann::json::exception& e) {
    throw ContractViolation(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ContractViolation("config: cannot open " + path.string());
  try {
    return config_from_json(nlohmann::json::parse(is));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_config(const ExperimentConfig& c, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << to_json(c).dump(2) << "\n";
}

}  // namespace tgan
