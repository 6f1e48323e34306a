#include "trigan/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "trigan/errors.hpp"
#include "trigan/tape.hpp"

namespace tgan {

GradCheckReport gradient_check(const std::function<Tensor()>& f, std::vector<Tensor> params,
                               const GradCheckOptions& opts) {
  require(opts.step > 0.0, "gradient_check: step must be positive");
  for (auto& p : params) {
    p.set_requires_grad(true);
    p.zero_grad();
  }

  {
    Tape tape;
    TapeScope scope(tape);
    Tensor loss = f();
    if (!std::isfinite(loss.item())) throw NumericError("gradient_check: non-finite loss");
    tape.backward(loss);
  }

  std::mt19937_64 rng(opts.seed);
  GradCheckReport report;
  NoGradScope no_grad;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    auto values = params[pi].values();
    auto grad = params[pi].grad();

    std::vector<std::size_t> entries(values.size());
    std::iota(entries.begin(), entries.end(), std::size_t{0});
    if (opts.max_entries_per_param > 0 && entries.size() > opts.max_entries_per_param) {
      std::shuffle(entries.begin(), entries.end(), rng);
      entries.resize(opts.max_entries_per_param);
    }

    for (std::size_t e : entries) {
      const double saved = values[e];
      values[e] = saved + opts.step;
      const double up = f().item();
      values[e] = saved - opts.step;
      const double down = f().item();
      values[e] = saved;
      if (!std::isfinite(up) || !std::isfinite(down))
        throw NumericError("gradient_check: non-finite output perturbing parameter " +
                           std::to_string(pi) + " entry " + std::to_string(e));

      const double central = (up - down) / (2.0 * opts.step);
      const double analytic = grad[e];
      const double denom = std::max({std::abs(analytic), std::abs(central), 1e-8});
      const double rel = std::abs(analytic - central) / denom;
      ++report.entries_checked;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_param = pi;
        report.worst_entry = e;
      }
    }
  }
  return report;
}

}  // namespace tgan
