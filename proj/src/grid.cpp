#include "trigan/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trigan/errors.hpp"

namespace tgan {

namespace {

std::size_t axis_cell(double v, const Interval& r, std::size_t res) {
  if (!(v >= r.lo)) return 0;  // also catches NaN
  if (v >= r.hi) return res - 1;
  const auto i = static_cast<std::size_t>((v - r.lo) / r.width() * static_cast<double>(res));
  return std::min(i, res - 1);
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_same(const GridDensity& a, const GridDensity& b, const char* what) {
  require(a.same_geometry(b), std::string(what) + ": grids differ in range or resolution");
}

}  // namespace

GridDensity::GridDensity(Interval xr, Interval yr, std::size_t res)
    : x_range(xr), y_range(yr), resolution(res), mass(res * res, 0.0) {
  require(res >= 2, "GridDensity: resolution must be >= 2");
  require(xr.hi > xr.lo && yr.hi > yr.lo, "GridDensity: empty range");
}

std::size_t GridDensity::x_cell(double x) const { return axis_cell(x, x_range, resolution); }
std::size_t GridDensity::y_cell(double y) const { return axis_cell(y, y_range, resolution); }

double GridDensity::x_edge(std::size_t i) const {
  return x_range.lo + x_range.width() * static_cast<double>(i) / static_cast<double>(resolution);
}
double GridDensity::y_edge(std::size_t i) const {
  return y_range.lo + y_range.width() * static_cast<double>(i) / static_cast<double>(resolution);
}

bool GridDensity::same_geometry(const GridDensity& o) const {
  return x_range == o.x_range && y_range == o.y_range && resolution == o.resolution;
}

double GridDensity::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

void GridDensity::normalize() {
  const double t = total();
  require(t > 0.0, "GridDensity: cannot normalize zero mass");
  for (double& m : mass) m /= t;
}

GridDensity histogram2d(std::span<const Point2> samples, Interval x_range, Interval y_range,
                        std::size_t resolution) {
  require(!samples.empty(), "histogram2d: empty sample set");
  GridDensity g(x_range, y_range, resolution);
  for (const auto& s : samples) g.mass[g.index(g.x_cell(s[0]), g.y_cell(s[1]))] += 1.0;
  const double n = static_cast<double>(samples.size());
  for (double& m : g.mass) m /= n;
  return g;
}

double entropy(const GridDensity& p) {
  double h = 0.0;
  for (double m : p.mass) h -= xlogx(m);
  return h;
}

double jsd_multi(std::span<const GridDensity> densities, std::span<const double> weights) {
  require(!densities.empty(), "jsd_multi: no densities");
  require(densities.size() == weights.size(), "jsd_multi: one weight per density");
  double wsum = 0.0;
  for (double w : weights) {
    require(w > 0.0, "jsd_multi: weights must be positive");
    wsum += w;
  }
  require(std::abs(wsum - 1.0) < 1e-9, "jsd_multi: weights must sum to 1");
  for (const auto& d : densities) require_same(densities[0], d, "jsd_multi");

  GridDensity mixture = densities[0];
  std::fill(mixture.mass.begin(), mixture.mass.end(), 0.0);
  double weighted_h = 0.0;
  for (std::size_t i = 0; i < densities.size(); ++i) {
    for (std::size_t c = 0; c < mixture.mass.size(); ++c)
      mixture.mass[c] += weights[i] * densities[i].mass[c];
    weighted_h += weights[i] * entropy(densities[i]);
  }
  return std::max(0.0, entropy(mixture) - weighted_h);
}

double jsd(const GridDensity& p, const GridDensity& q) {
  const GridDensity d[2] = {p, q};
  const double w[2] = {0.5, 0.5};
  return jsd_multi(d, w);
}

DiscriminatorGrids optimal_discriminators(const GridDensity& p, const GridDensity& px,
                                          const GridDensity& py) {
  require_same(p, px, "optimal_discriminators");
  require_same(p, py, "optimal_discriminators");
  DiscriminatorGrids out;
  out.d1.resize(p.cells());
  out.d2.resize(p.cells());
  for (std::size_t c = 0; c < p.cells(); ++c) {
    const double all = p.mass[c] + px.mass[c] + py.mass[c];
    const double fakes = px.mass[c] + py.mass[c];
    out.d1[c] = all > 0.0 ? p.mass[c] / all : 1.0 / 3.0;
    out.d2[c] = fakes > 0.0 ? px.mass[c] / fakes : 0.5;
  }
  return out;
}

double grid_value_function(const GridDensity& p, const GridDensity& px, const GridDensity& py,
                           std::span<const double> d1, std::span<const double> d2) {
  require_same(p, px, "grid_value_function");
  require_same(p, py, "grid_value_function");
  require(d1.size() == p.cells() && d2.size() == p.cells(),
          "grid_value_function: discriminator fields must cover the grid");
  double v = 0.0;
  for (std::size_t c = 0; c < p.cells(); ++c) {
    if (p.mass[c] > 0.0) v += p.mass[c] * std::log(d1[c]);
    if (px.mass[c] > 0.0) v += px.mass[c] * std::log((1.0 - d1[c]) * d2[c]);
    if (py.mass[c] > 0.0) v += py.mass[c] * std::log((1.0 - d1[c]) * (1.0 - d2[c]));
  }
  return v;
}

std::vector<double> triple_gan_s_optimal_discriminator(const GridDensity& p,
                                                       const GridDensity& px,
                                                       const GridDensity& py, double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  require_same(p, px, "triple_gan_s_optimal_discriminator");
  require_same(p, py, "triple_gan_s_optimal_discriminator");
  std::vector<double> d(p.cells());
  for (std::size_t c = 0; c < p.cells(); ++c) {
    const double denom = p.mass[c] + (1.0 - alpha) * px.mass[c] + alpha * py.mass[c];
    d[c] = denom > 0.0 ? p.mass[c] / denom : 0.5;
  }
  return d;
}

GridDensity mix(const GridDensity& a, const GridDensity& b, double weight_b) {
  require_same(a, b, "mix");
  GridDensity out = a;
  for (std::size_t c = 0; c < out.cells(); ++c)
    out.mass[c] = (1.0 - weight_b) * a.mass[c] + weight_b * b.mass[c];
  return out;
}

}  // namespace tgan
