#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "trigan/tensor.hpp"

namespace tgan {

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::size_t worst_param = 0;
  std::size_t worst_entry = 0;
  std::size_t entries_checked = 0;
};

struct GradCheckOptions {
  double step = 1e-5;
  // 0 checks every entry; otherwise a seeded random subset of this many
  // entries per parameter tensor.
  std::size_t max_entries_per_param = 0;
  std::uint64_t seed = 0;
};

// Compares the reverse-mode gradient of the scalar `f` against central
// differences, entry by entry:
//   |analytic - central| / max(|analytic|, |central|, 1e-8)
// `f` must rebuild its graph from `params` on every call. Throws NumericError
// if `f` returns a non-finite value.
GradCheckReport gradient_check(const std::function<Tensor()>& f, std::vector<Tensor> params,
                               const GradCheckOptions& opts = {});

}  // namespace tgan
