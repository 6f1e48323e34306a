#include "trigan/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "trigan/errors.hpp"

namespace tgan {

void RankingInstance::validate() const {
  require(labels.size() == scores.size(), "ranking: labels and scores differ in length");
  for (int y : labels) require(y == 0 || y == 1, "ranking: labels must be 0 or 1");
}

std::vector<std::size_t> rank_labels(const RankingInstance& inst) {
  inst.validate();
  std::vector<std::size_t> order(inst.scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inst.scores[a] > inst.scores[b];
  });
  return order;
}

namespace {

void check_k(const RankingInstance& inst, std::size_t k) {
  require(k >= 1 && k <= inst.labels.size(),
          "k = " + std::to_string(k) + " outside [1, " + std::to_string(inst.labels.size()) + "]");
}

}  // namespace

double precision_at_k(const RankingInstance& inst, std::size_t k) {
  check_k(inst, k);
  const auto order = rank_labels(inst);
  double hits = 0.0;
  for (std::size_t pos = 0; pos < k; ++pos) hits += inst.labels[order[pos]];
  return hits / static_cast<double>(k);
}

double dcg_at_k(const RankingInstance& inst, std::size_t k) {
  check_k(inst, k);
  const auto order = rank_labels(inst);
  double dcg = 0.0;
  for (std::size_t pos = 0; pos < k; ++pos)
    dcg += inst.labels[order[pos]] / std::log(static_cast<double>(pos) + 2.0);
  return dcg;
}

double ndcg_at_k(const RankingInstance& inst, std::size_t k) {
  const double dcg = dcg_at_k(inst, k);
  const auto relevant = static_cast<std::size_t>(std::count(inst.labels.begin(), inst.labels.end(), 1));
  const std::size_t top = std::min(k, relevant);
  if (top == 0) return 0.0;
  double ideal = 0.0;
  for (std::size_t l = 1; l <= top; ++l) ideal += 1.0 / std::log(static_cast<double>(l) + 1.0);
  return dcg / ideal;
}

}  // namespace tgan
