#pragma once

#include <optional>
#include <span>

#include "trigan/grid.hpp"

namespace tgan {

// Median pairwise Euclidean distance over the pooled set. Sets larger than
// `max_points` are thinned by a fixed stride so the result is deterministic.
double median_heuristic_bandwidth(std::span<const Point2> a, std::span<const Point2> b,
                                  std::size_t max_points = 2000);

// Biased (V-statistic) estimate of squared MMD under
// k(u, v) = exp(-|u - v|^2 / (2 h^2)). Without a bandwidth the median
// heuristic is used.
double mmd2(std::span<const Point2> a, std::span<const Point2> b,
            std::optional<double> bandwidth = std::nullopt);

}  // namespace tgan
