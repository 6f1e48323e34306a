#include "trigan/mixture.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "trigan/errors.hpp"

namespace tgan {

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

struct Cholesky2 {
  double l11, l21, l22;
};

Cholesky2 cholesky(const std::array<double, 4>& s) {
  const double l11 = std::sqrt(s[0]);
  const double l21 = s[2] / l11;
  return {l11, l21, std::sqrt(s[3] - l21 * l21)};
}

}  // namespace

void GaussianMixtureSpec::validate() const {
  require(!components.empty(), "mixture: no components");
  double wsum = 0.0;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    const std::string tag = "mixture component " + std::to_string(i);
    require(c.weight > 0.0, tag + ": weight must be positive");
    wsum += c.weight;
    const auto& s = c.cov;
    require(s[1] == s[2], tag + ": covariance not symmetric");
    require(s[0] > 0.0 && s[0] * s[3] - s[1] * s[2] > 0.0,
            tag + ": covariance not positive-definite");
  }
  require(std::abs(wsum - 1.0) <= 1e-12, "mixture: weights must sum to 1");
}

GaussianMixtureSpec GaussianMixtureSpec::toy() {
  const std::array<double, 4> wide_x{3.0, 0.0, 0.0, 0.025};
  const std::array<double, 4> wide_y{0.025, 0.0, 0.0, 3.0};
  GaussianMixtureSpec s;
  s.components = {{0.25, {0.0, 1.5}, wide_x},
                  {0.25, {-1.5, 0.0}, wide_y},
                  {0.25, {1.5, 0.0}, wide_y},
                  {0.25, {0.0, -1.5}, wide_x}};
  return s;
}

PairDataset sample_mixture(const GaussianMixtureSpec& spec, std::size_t n_per_component,
                           std::uint64_t seed) {
  spec.validate();
  require(n_per_component >= 1, "sample_mixture: n_per_component must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PairDataset ds;
  ds.rows.reserve(n_per_component * spec.components.size());
  for (std::size_t ci = 0; ci < spec.components.size(); ++ci) {
    const auto& c = spec.components[ci];
    const Cholesky2 l = cholesky(c.cov);
    for (std::size_t i = 0; i < n_per_component; ++i) {
      const double u = normal(rng);
      const double v = normal(rng);
      ds.rows.push_back({c.mean[0] + l.l11 * u, c.mean[1] + l.l21 * u + l.l22 * v,
                         static_cast<int>(ci), false});
    }
  }
  return ds;
}

double gaussian_pdf(const GaussianMixtureSpec::Component& c, const Point2& p) {
  const auto& s = c.cov;
  const double det = s[0] * s[3] - s[1] * s[2];
  const double dx = p[0] - c.mean[0];
  const double dy = p[1] - c.mean[1];
  // (dx, dy) S^-1 (dx, dy)^T with S^-1 = [s3 -s1; -s2 s0] / det
  const double q = (s[3] * dx * dx - (s[1] + s[2]) * dx * dy + s[0] * dy * dy) / det;
  return std::exp(-0.5 * q) / (2.0 * std::numbers::pi * std::sqrt(det));
}

double mixture_pdf(const GaussianMixtureSpec& spec, const Point2& point) {
  double p = 0.0;
  for (const auto& c : spec.components) p += c.weight * gaussian_pdf(c, point);
  return p;
}

GridDensity mixture_grid(const GaussianMixtureSpec& spec, Interval x_range, Interval y_range,
                         std::size_t resolution) {
  spec.validate();
  GridDensity g(x_range, y_range, resolution);
  const std::size_t res = resolution;
  std::vector<double> ycol(res);

  for (const auto& c : spec.components) {
    // Factor as p(x) p(y | x): integrate x by fine midpoints, y exactly.
    const double sx = std::sqrt(c.cov[0]);
    const double slope = c.cov[2] / c.cov[0];
    const double sy = std::sqrt(c.cov[3] - c.cov[2] * slope);
    const double lo = c.mean[0] - 12.0 * sx;
    const double hi = c.mean[0] + 12.0 * sx;
    const double cell_w = x_range.width() / static_cast<double>(res);
    const double h_target = std::min(cell_w, sx) / 32.0;

    auto integrate_segment = [&](double a, double b, std::size_t ix) {
      a = std::max(a, lo);
      b = std::min(b, hi);
      if (!(b > a)) return;
      const auto n = static_cast<std::size_t>(std::ceil((b - a) / h_target));
      const double h = (b - a) / static_cast<double>(n);
      std::fill(ycol.begin(), ycol.end(), 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        const double x = a + (static_cast<double>(k) + 0.5) * h;
        const double zx = (x - c.mean[0]) / sx;
        const double wx = h * std::exp(-0.5 * zx * zx) / (sx * std::sqrt(2.0 * std::numbers::pi));
        const double my = c.mean[1] + slope * (x - c.mean[0]);
        double prev = 0.0;
        for (std::size_t iy = 0; iy < res; ++iy) {
          const double cdf = iy + 1 == res ? 1.0 : normal_cdf((g.y_edge(iy + 1) - my) / sy);
          ycol[iy] += wx * (cdf - prev);
          prev = cdf;
        }
      }
      for (std::size_t iy = 0; iy < res; ++iy) g.mass[g.index(ix, iy)] += c.weight * ycol[iy];
    };

    integrate_segment(lo, g.x_edge(0), 0);
    for (std::size_t ix = 0; ix < res; ++ix) integrate_segment(g.x_edge(ix), g.x_edge(ix + 1), ix);
    integrate_segment(g.x_edge(res), hi, res - 1);
  }
  g.normalize();
  return g;
}

nlohmann::json to_json(const GaussianMixtureSpec& spec) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : spec.components)
    comps.push_back({{"weight", c.weight}, {"mean", c.mean}, {"cov", c.cov}});
  return {{"components", comps}};
}

GaussianMixtureSpec mixture_from_json(const nlohmann::json& j) {
  GaussianMixtureSpec s;
  for (const auto& c : j.at("components"))
    s.components.push_back({c.at("weight").get<double>(), c.at("mean").get<std::array<double, 2>>(),
                            c.at("cov").get<std::array<double, 4>>()});
  s.validate();
  return s;
}

}  // namespace tgan
