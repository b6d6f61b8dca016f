#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "topicscope/error.hpp"
#include "topicscope/lda.hpp"

namespace topicscope {

enum class DistanceKind { kl, cosine };

std::string to_string(DistanceKind kind);

/// KL(p || q) in nats after smoothing both vectors with `epsilon` and
/// renormalizing. Identical inputs give exactly 0; the result is never negative.
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar kl_divergence(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q,
                                        typename DerivedP::Scalar epsilon = 1e-12) {
  using Scalar = typename DerivedP::Scalar;
  if (p.size() != q.size())
    throw ValidationError("KL divergence of vectors with lengths " + std::to_string(p.size()) + " and " +
                          std::to_string(q.size()));
  if ((p.array() < 0).any() || (q.array() < 0).any() || !p.allFinite() || !q.allFinite())
    throw ValidationError("KL divergence needs finite non-negative vectors");
  const auto ps = (p.array() + epsilon) / (p.array() + epsilon).sum();
  const auto qs = (q.array() + epsilon) / (q.array() + epsilon).sum();
  const Scalar value = (ps * (ps / qs).log()).sum();
  return value > Scalar(0) ? value : Scalar(0);
}

template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar cosine_similarity(const Eigen::MatrixBase<DerivedP>& p,
                                            const Eigen::MatrixBase<DerivedQ>& q) {
  if (p.size() != q.size())
    throw ValidationError("cosine similarity of vectors with lengths " + std::to_string(p.size()) + " and " +
                          std::to_string(q.size()));
  const auto np = p.norm();
  const auto nq = q.norm();
  if (np == 0 || nq == 0) throw ValidationError("cosine similarity of a zero vector");
  return p.cwiseProduct(q.template cast<typename DerivedP::Scalar>()).sum() / (np * nq);
}

template <typename Scalar = double>
struct DistanceMatrix {
  DistanceKind kind = DistanceKind::kl;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> values;

  Eigen::Index size() const { return values.rows(); }
};

/// A(i, j) = KL(row_i || row_j) or cos(row_i, row_j) over the rows of a
/// topic-word matrix.
template <typename Derived>
DistanceMatrix<typename Derived::Scalar> topic_distance_matrix(const Eigen::MatrixBase<Derived>& rows,
                                                               DistanceKind kind) {
  DistanceMatrix<typename Derived::Scalar> out;
  out.kind = kind;
  const auto k = rows.rows();
  out.values.resize(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (kind == DistanceKind::kl) {
        out.values(i, j) = kl_divergence(rows.row(i), rows.row(j));
      } else if (j < i) {
        out.values(i, j) = out.values(j, i);
      } else {
        out.values(i, j) = cosine_similarity(rows.row(i), rows.row(j));
      }
    }
  }
  return out;
}

inline DistanceMatrix<double> topic_distance_matrix(const LdaModel& model, DistanceKind kind) {
  return topic_distance_matrix(model.phi, kind);
}

enum class PairOrder { most_similar, most_distinct };

struct TopicPair {
  Eigen::Index first = 0;
  Eigen::Index second = 0;
  double value = 0.0;

  bool operator==(const TopicPair&) const = default;
};

/// Off-diagonal entries ranked by similarity. Cosine: most_similar is
/// descending. KL: most_similar is ascending and both directions are listed.
/// Cosine lists each unordered pair once as (i, j) with i < j. Ties break on
/// (i, j).
std::vector<TopicPair> rank_pairs(const DistanceMatrix<double>& matrix, PairOrder order);

/// CSV with a header row and first column of topic indices; values written
/// with 17 significant digits.
std::string distance_matrix_csv(const DistanceMatrix<double>& matrix);
// One-line sidecar: "kind=kl log_base=e" (log_base=none for cosine).
std::string distance_matrix_metadata(const DistanceMatrix<double>& matrix);

}  // namespace topicscope
