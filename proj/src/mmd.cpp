#include "trigan/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "trigan/errors.hpp"
#include "trigan/kernels.hpp"

namespace tgan {

double median_heuristic_bandwidth(std::span<const Point2> a, std::span<const Point2> b,
                                  std::size_t max_points) {
  std::vector<Point2> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  if (pooled.size() > max_points) {
    const std::size_t stride = (pooled.size() + max_points - 1) / max_points;
    std::vector<Point2> thin;
    for (std::size_t i = 0; i < pooled.size(); i += stride) thin.push_back(pooled[i]);
    pooled = std::move(thin);
  }
  std::vector<double> d;
  d.reserve(pooled.size() * (pooled.size() - 1) / 2);
  for (std::size_t i = 0; i < pooled.size(); ++i)
    for (std::size_t j = i + 1; j < pooled.size(); ++j)
      d.push_back(std::hypot(pooled[i][0] - pooled[j][0], pooled[i][1] - pooled[j][1]));
  if (d.empty()) return 0.0;
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

double mmd2(std::span<const Point2> a, std::span<const Point2> b,
            std::optional<double> bandwidth) {
  require(!a.empty() && !b.empty(), "mmd2: empty sample set");
  const double h = bandwidth ? *bandwidth : median_heuristic_bandwidth(a, b);
  require(h > 0.0 && std::isfinite(h), "mmd2: bandwidth must be positive");

  const std::span<const double> fa(a.front().data(), a.size() * 2);
  const std::span<const double> fb(b.front().data(), b.size() * 2);
  const auto s = kernels::parallel::rbf_sums(fa, fb, 2, 1.0 / (2.0 * h * h));
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  return std::max(0.0, s.aa / (na * na) + s.bb / (nb * nb) - 2.0 * s.ab / (na * nb));
}

}  // namespace tgan
