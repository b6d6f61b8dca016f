#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the code path it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "topicscope/corpus.hpp"

namespace oracle {

inline double cosine(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  double dot = 0, na = 0, nb = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

/// Best mean cosine over all topic permutations (exhaustive; small K only).
inline double matched_mean_cosine(const Eigen::MatrixXd& estimated, const Eigen::MatrixXd& truth) {
  std::vector<int> perm(static_cast<std::size_t>(truth.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1.0;
  do {
    double total = 0.0;
    for (std::size_t k = 0; k < perm.size(); ++k)
      total += cosine(estimated.row(perm[k]), truth.row(static_cast<Eigen::Index>(k)));
    best = std::max(best, total / static_cast<double>(perm.size()));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// Nested-loop document scan: how many documents contain w_i (and w_j).
struct DocCounts {
  std::int64_t docs = 0;
  std::vector<std::int64_t> single;
  std::vector<std::vector<std::int64_t>> joint;
};

inline DocCounts brute_force_doc_counts(const topicscope::BowCorpus& corpus, const std::vector<std::int32_t>& words) {
  DocCounts out;
  const auto m = words.size();
  out.docs = static_cast<std::int64_t>(corpus.docs.size());
  out.single.assign(m, 0);
  out.joint.assign(m, std::vector<std::int64_t>(m, 0));
  for (const auto& doc : corpus.docs) {
    for (std::size_t i = 0; i < m; ++i) {
      bool has_i = false;
      for (const auto t : doc.tokens) has_i = has_i || t == words[i];
      if (!has_i) continue;
      ++out.single[i];
      for (std::size_t j = 0; j < m; ++j) {
        bool has_j = false;
        for (const auto t : doc.tokens) has_j = has_j || t == words[j];
        if (has_j) ++out.joint[i][j];
      }
    }
  }
  return out;
}

/// O(D K^2) edge weights from theta with a strict threshold.
inline std::map<std::pair<int, int>, std::int64_t> brute_force_edges(const Eigen::MatrixXd& theta, double threshold) {
  std::map<std::pair<int, int>, std::int64_t> edges;
  for (Eigen::Index d = 0; d < theta.rows(); ++d)
    for (int i = 0; i < theta.cols(); ++i)
      for (int j = i + 1; j < theta.cols(); ++j)
        if (theta(d, i) > threshold && theta(d, j) > threshold) ++edges[{i, j}];
  return edges;
}

inline std::int64_t pair_count_sum(const Eigen::MatrixXd& theta, double threshold) {
  std::int64_t total = 0;
  for (Eigen::Index d = 0; d < theta.rows(); ++d) {
    std::int64_t m = 0;
    for (Eigen::Index k = 0; k < theta.cols(); ++k) m += theta(d, k) > threshold;
    total += m * (m - 1) / 2;
  }
  return total;
}

/// Random row-stochastic matrix with some rows concentrated and some spread.
template <typename Gen>
Eigen::MatrixXd random_theta(Gen& gen, int docs, int topics) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd theta(docs, topics);
  for (int d = 0; d < docs; ++d) {
    const double sharp = 1.0 + 6.0 * u(gen);
    for (int k = 0; k < topics; ++k) theta(d, k) = std::pow(u(gen), sharp);
    theta.row(d) /= theta.row(d).sum();
  }
  return theta;
}

}  // namespace oracle
