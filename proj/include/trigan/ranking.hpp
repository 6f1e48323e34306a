#pragma once

#include <cstddef>
#include <vector>

namespace tgan {

// Multi-label prediction for one example: binary relevance and scores.
struct RankingInstance {
  std::vector<int> labels;
  std::vector<double> scores;

  void validate() const;
};

// Label indices ordered by descending score; ties keep the lower index first.
std::vector<std::size_t> rank_labels(const RankingInstance& inst);

// Fraction of relevant labels among the top k.
double precision_at_k(const RankingInstance& inst, std::size_t k);

// Discounted gain of the top k over the ideal ranking's gain; positions are
// 1-based and discounted by 1 / ln(position + 1). Returns 0 when no label is
// relevant.
double dcg_at_k(const RankingInstance& inst, std::size_t k);
double ndcg_at_k(const RankingInstance& inst, std::size_t k);

}  // namespace tgan
