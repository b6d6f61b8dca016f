#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "topicscope/distance.hpp"

using namespace topicscope;

TEST_CASE("KL divergence") {
  Eigen::Vector2d p(0.5, 0.5), q(0.25, 0.75);
  CHECK(kl_divergence(p, p) == 0.0);
  // Frozen from arbitrary-precision evaluation of 0.5 ln 2 + 0.5 ln(2/3) and its reverse.
  CHECK(std::abs(kl_divergence(p, q) - 0.14384103622589046) < 1e-4);
  CHECK(std::abs(kl_divergence(q, p) - 0.13081203594113696) < 1e-4);
  CHECK(kl_divergence(p, q) != kl_divergence(q, p));
  Eigen::Vector2d zero_mass(1.0, 0.0);
  CHECK(std::isfinite(kl_divergence(zero_mass, p)));
  CHECK(std::isfinite(kl_divergence(p, zero_mass)));
  CHECK_THROWS_AS(kl_divergence(Eigen::VectorXd(p), Eigen::VectorXd(Eigen::Vector3d(0.2, 0.3, 0.5))), ValidationError);
  CHECK_THROWS_AS(kl_divergence(p, Eigen::Vector2d(-0.5, 1.5)), ValidationError);
}

TEST_CASE("Gibbs inequality on random distributions") {
  std::mt19937 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    Eigen::VectorXd p(12), q(12);
    for (int k = 0; k < 12; ++k) {
      p[k] = std::pow(u(gen), 3);
      q[k] = std::pow(u(gen), 3);
    }
    p /= p.sum();
    q /= q.sum();
    CHECK(kl_divergence(p, q) >= 0.0);
  }
}

TEST_CASE("cosine similarity") {
  Eigen::Vector2d p(0.5, 0.5), q(0.25, 0.75);
  CHECK(cosine_similarity(p, p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine_similarity(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)) == 0.0);
  CHECK(std::abs(cosine_similarity(p, q) - 0.8944271909999159) < 1e-6);
  CHECK_THROWS_AS(cosine_similarity(p, Eigen::Vector2d::Zero()), ValidationError);
}

TEST_CASE("topic distance matrices") {
  SUBCASE("duplicate topics") {
    Eigen::MatrixXd phi(2, 3);
    phi << 0.2, 0.3, 0.5, 0.2, 0.3, 0.5;
    const auto kl = topic_distance_matrix(phi, DistanceKind::kl);
    const auto cos = topic_distance_matrix(phi, DistanceKind::cosine);
    CHECK(kl.values(0, 1) == 0.0);
    CHECK(cos.values(0, 1) == doctest::Approx(1.0));
  }
  SUBCASE("single topic") {
    Eigen::MatrixXd phi(1, 3);
    phi << 0.2, 0.3, 0.5;
    CHECK(topic_distance_matrix(phi, DistanceKind::kl).values(0, 0) == 0.0);
    CHECK(topic_distance_matrix(phi, DistanceKind::cosine).values(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("entries equal the scalar operations") {
    std::mt19937 gen(4);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    Eigen::MatrixXd phi(3, 15);
    for (Eigen::Index i = 0; i < phi.size(); ++i) phi.data()[i] = u(gen);
    for (int k = 0; k < 3; ++k) phi.row(k) /= phi.row(k).sum();
    const auto kl = topic_distance_matrix(phi, DistanceKind::kl);
    const auto cos = topic_distance_matrix(phi, DistanceKind::cosine);
    for (int i = 0; i < 3; ++i) {
      CHECK(kl.values(i, i) == 0.0);
      CHECK(std::abs(cos.values(i, i) - 1.0) < 1e-9);
      for (int j = 0; j < 3; ++j) {
        Eigen::VectorXd a = phi.row(i).transpose(), b = phi.row(j).transpose();
        CHECK(kl.values(i, j) == doctest::Approx(kl_divergence(a, b)).epsilon(1e-12));
        CHECK(std::abs(cos.values(i, j) - oracle::cosine(phi.row(i), phi.row(j))) < 1e-12);
        CHECK(cos.values(i, j) == cos.values(j, i));
        CHECK(kl.values(i, j) >= 0.0);
      }
    }
  }
}

TEST_CASE("rank_pairs") {
  DistanceMatrix<double> cos;
  cos.kind = DistanceKind::cosine;
  cos.values = Eigen::MatrixXd::Constant(6, 6, 0.2);
  cos.values.diagonal().setOnes();
  auto flat = rank_pairs(cos, PairOrder::most_similar);
  CHECK(flat.size() == 15);
  CHECK(flat[0] == TopicPair{0, 1, 0.2});
  CHECK(flat[1] == TopicPair{0, 2, 0.2});
  CHECK(flat.back() == TopicPair{4, 5, 0.2});

  cos.values(2, 5) = cos.values(5, 2) = 0.9;
  cos.values(1, 3) = cos.values(3, 1) = 0.05;
  CHECK(rank_pairs(cos, PairOrder::most_similar).front() == TopicPair{2, 5, 0.9});
  CHECK(rank_pairs(cos, PairOrder::most_distinct).front() == TopicPair{1, 3, 0.05});

  DistanceMatrix<double> kl;
  kl.kind = DistanceKind::kl;
  kl.values.resize(3, 3);
  kl.values << 0, 0.4, 0.9, 0.3, 0, 0.1, 0.8, 0.2, 0;
  const auto similar = rank_pairs(kl, PairOrder::most_similar);
  REQUIRE(similar.size() == 6);
  CHECK(similar[0] == TopicPair{1, 2, 0.1});
  CHECK(similar[1] == TopicPair{2, 1, 0.2});
  for (std::size_t i = 1; i < similar.size(); ++i) CHECK(similar[i - 1].value <= similar[i].value);
  CHECK(rank_pairs(kl, PairOrder::most_distinct).front() == TopicPair{0, 2, 0.9});

  DistanceMatrix<double> one;
  one.values = Eigen::MatrixXd::Zero(1, 1);
  CHECK_THROWS_AS(rank_pairs(one, PairOrder::most_similar), ValidationError);
}

namespace {

// Count of topics j != i whose cosine with i beats the KL-nearest topic.
int cosine_rank_of_kl_nearest(const DistanceMatrix<double>& kl, const DistanceMatrix<double>& cos, int i) {
  const auto k = static_cast<int>(kl.values.rows());
  int nearest = -1;
  for (int j = 0; j < k; ++j)
    if (j != i && (nearest < 0 || kl.values(i, j) < kl.values(i, nearest))) nearest = j;
  int better = 0;
  for (int j = 0; j < k; ++j)
    if (j != i && cos.values(i, j) > cos.values(i, nearest)) ++better;
  return better;
}

}  // namespace

TEST_CASE("KL nearest topic sits in the top two cosine ranks") {
  // Two pairs of overlapping topics over eight words.
  Eigen::MatrixXd phi(4, 8);
  phi << 0.30, 0.30, 0.20, 0.10, 0.04, 0.03, 0.02, 0.01,  //
      0.25, 0.20, 0.30, 0.15, 0.04, 0.03, 0.02, 0.01,     //
      0.01, 0.02, 0.03, 0.04, 0.10, 0.20, 0.30, 0.30,     //
      0.01, 0.02, 0.04, 0.03, 0.20, 0.15, 0.25, 0.30;
  const auto skl = topic_distance_matrix(phi, DistanceKind::kl);
  const auto scos = topic_distance_matrix(phi, DistanceKind::cosine);
  for (int i = 0; i < 4; ++i) CHECK(cosine_rank_of_kl_nearest(skl, scos, i) == 0);

  const auto s = generate_synthetic(3, 50, 200, 100, 0.1, 0.01, 77);
  LdaConfig config;
  config.num_topics = 3;
  config.alpha = 0.1;
  config.iterations = 300;
  config.burn_in = 100;
  const auto model = train_gibbs(s.corpus, config);
  const auto kl = topic_distance_matrix(model, DistanceKind::kl);
  const auto cos = topic_distance_matrix(model, DistanceKind::cosine);
  for (int i = 0; i < 3; ++i) CHECK(cosine_rank_of_kl_nearest(kl, cos, i) < 2);
  bool asymmetric = false;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) asymmetric = asymmetric || std::abs(kl.values(i, j) - kl.values(j, i)) > 1e-6;
  CHECK(asymmetric);
  CHECK(distance_matrix_csv(kl).substr(0, 14) == "topic,0,1,2\n0,");
  CHECK(distance_matrix_metadata(kl) == "kind=kl log_base=e\n");
}
