#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "trigan/grid.hpp"

namespace tgan {

struct PairRow {
  double x = 0.0;
  double y = 0.0;
  int component = 0;
  bool paired = false;
  bool operator==(const PairRow&) const = default;
};

struct PairDataset {
  std::vector<PairRow> rows;

  std::size_t size() const { return rows.size(); }
  std::size_t component_count() const;
  std::size_t paired_count() const;
  std::vector<std::size_t> paired_per_component() const;
  std::vector<std::size_t> paired_indices() const;
  std::vector<Point2> points() const;
  bool operator==(const PairDataset&) const = default;
};

// Marks a stratified random subset as paired: round(fraction * rows) in
// total, split evenly over components with the remainder going to the lowest
// component indices. Earlier marks are cleared.
PairDataset split_semi_supervised(const PairDataset& dataset, double fraction,
                                  std::uint64_t seed);

// CSV with header `x,y,component,paired`; doubles carry 17 significant digits
// so a write/read round trip is value-exact.
void write_dataset_csv(const PairDataset& dataset, const std::filesystem::path& path);
PairDataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace tgan
