#include "topicscope/distance.hpp"

#include <algorithm>
#include <cstdio>

namespace topicscope {

std::string to_string(DistanceKind kind) { return kind == DistanceKind::kl ? "kl" : "cosine"; }

std::vector<TopicPair> rank_pairs(const DistanceMatrix<double>& matrix, PairOrder order) {
  const auto k = matrix.size();
  if (k < 2) throw ValidationError("ranking topic pairs needs at least 2 topics");
  std::vector<TopicPair> pairs;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i == j || (matrix.kind == DistanceKind::cosine && j < i)) continue;
      pairs.push_back({i, j, matrix.values(i, j)});
    }
  }
  // For KL a small value means similar; for cosine a large one does.
  const bool ascending = (matrix.kind == DistanceKind::kl) == (order == PairOrder::most_similar);
  std::stable_sort(pairs.begin(), pairs.end(), [ascending](const TopicPair& a, const TopicPair& b) {
    if (a.value != b.value) return ascending ? a.value < b.value : a.value > b.value;
    return std::tie(a.first, a.second) < std::tie(b.first, b.second);
  });
  return pairs;
}

std::string distance_matrix_csv(const DistanceMatrix<double>& matrix) {
  std::string out = "topic";
  const auto k = matrix.size();
  for (Eigen::Index j = 0; j < k; ++j) out += "," + std::to_string(j);
  out += "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < k; ++i) {
    out += std::to_string(i);
    for (Eigen::Index j = 0; j < k; ++j) {
      std::snprintf(buf, sizeof buf, ",%.17g", matrix.values(i, j));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::string distance_matrix_metadata(const DistanceMatrix<double>& matrix) {
  return "kind=" + to_string(matrix.kind) + " log_base=" + (matrix.kind == DistanceKind::kl ? "e" : "none") + "\n";
}

}  // namespace topicscope
