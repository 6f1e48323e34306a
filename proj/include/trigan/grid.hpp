#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tgan {

using Point2 = std::array<double, 2>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

// Probability mass on a resolution x resolution grid over x_range x y_range.
// Cells are half-open; mass is stored row-major with x as the slow index.
struct GridDensity {
  Interval x_range;
  Interval y_range;
  std::size_t resolution = 0;
  std::vector<double> mass;

  GridDensity() = default;
  GridDensity(Interval xr, Interval yr, std::size_t res);

  std::size_t cells() const { return resolution * resolution; }
  std::size_t index(std::size_t ix, std::size_t iy) const { return ix * resolution + iy; }
  // Cell containing v along an axis; values outside the range clip to the
  // edge cells.
  std::size_t x_cell(double x) const;
  std::size_t y_cell(double y) const;
  double x_edge(std::size_t i) const;
  double y_edge(std::size_t i) const;

  bool same_geometry(const GridDensity& o) const;
  double total() const;
  void normalize();
};

// Default toy-task grid: [-5, 5]^2 at 64 x 64.
inline constexpr Interval kToyRange{-5.0, 5.0};
inline constexpr std::size_t kToyResolution = 64;

GridDensity histogram2d(std::span<const Point2> samples, Interval x_range, Interval y_range,
                        std::size_t resolution);

// Entropy in nats with 0 log 0 = 0.
double entropy(const GridDensity& p);

// H(sum w_i p_i) - sum w_i H(p_i), in nats.
double jsd_multi(std::span<const GridDensity> densities, std::span<const double> weights);
// Two-distribution equal-weight convenience form.
double jsd(const GridDensity& p, const GridDensity& q);

struct DiscriminatorGrids {
  std::vector<double> d1;
  std::vector<double> d2;
};

// Pointwise D1* = p / (p + p_x + p_y), D2* = p_x / (p_x + p_y); cells where a
// denominator vanishes take the equal-density limits 1/3 and 1/2.
DiscriminatorGrids optimal_discriminators(const GridDensity& p, const GridDensity& px,
                                          const GridDensity& py);

// Grid integral of the three-player value function for given discriminator
// fields:
//   sum p log D1 + sum p_x log((1 - D1) D2) + sum p_y log((1 - D1)(1 - D2))
// with zero-mass cells contributing nothing.
double grid_value_function(const GridDensity& p, const GridDensity& px, const GridDensity& py,
                           std::span<const double> d1, std::span<const double> d2);

// Optimal single discriminator of the two-player baseline whose fake joint is
// (1 - alpha) p_x + alpha p_y: D* = p / (p + (1 - alpha) p_x + alpha p_y).
std::vector<double> triple_gan_s_optimal_discriminator(const GridDensity& p,
                                                       const GridDensity& px,
                                                       const GridDensity& py, double alpha);

// Equal-weight mixture of two grids on the same geometry.
GridDensity mix(const GridDensity& a, const GridDensity& b, double weight_b = 0.5);

}  // namespace tgan
