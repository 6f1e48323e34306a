#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "trigan/dataset.hpp"
#include "trigan/grid.hpp"

namespace tgan {

// Ground-truth joint over (x, y): a weighted sum of bivariate normals.
struct GaussianMixtureSpec {
  struct Component {
    double weight = 1.0;
    std::array<double, 2> mean{};
    std::array<double, 4> cov{1.0, 0.0, 0.0, 1.0};  // row-major 2 x 2
    bool operator==(const Component&) const = default;
  };
  std::vector<Component> components;

  // Weights positive and summing to 1 within 1e-12; each covariance
  // symmetric positive-definite.
  void validate() const;
  bool operator==(const GaussianMixtureSpec&) const = default;

  // Four equal-weight bars: horizontal at y = +-1.5, vertical at x = +-1.5.
  static GaussianMixtureSpec toy();
};

// n_per_component rows per component, in component order, via the Cholesky
// factor of each covariance. All rows start unpaired.
PairDataset sample_mixture(const GaussianMixtureSpec& spec, std::size_t n_per_component,
                           std::uint64_t seed);

double mixture_pdf(const GaussianMixtureSpec& spec, const Point2& point);
double gaussian_pdf(const GaussianMixtureSpec::Component& c, const Point2& point);

// Exact cell masses of the mixture on a grid; mass outside the range is
// folded into the edge cells, matching histogram2d's clipping.
GridDensity mixture_grid(const GaussianMixtureSpec& spec, Interval x_range, Interval y_range,
                         std::size_t resolution);

nlohmann::json to_json(const GaussianMixtureSpec& spec);
GaussianMixtureSpec mixture_from_json(const nlohmann::json& j);

}  // namespace tgan
