#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "topicscope/corpus.hpp"

namespace topicscope {

// Row-major document-topic counts: the sampler walks one document's row.
using DocTopicCounts = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
// Column-major topic-word counts: one word's column holds all K topics.
using TopicWordCounts = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic>;
using TopicTotals = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct LdaConfig {
  int num_topics = 1;
  // Unset resolves to 50 / num_topics.
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 200;
  std::uint64_t seed = 1;
  // Average theta/phi over the sweeps after burn_in instead of using the final state.
  bool average_after_burn_in = false;

  double effective_alpha() const { return alpha ? *alpha : 50.0 / num_topics; }
  void validate() const;
};

struct LdaModel {
  LdaConfig config;  // alpha always resolved
  std::vector<std::vector<std::int32_t>> assignments;  // z[d][n]
  DocTopicCounts doc_topic;                             // D x K
  TopicWordCounts topic_word;                           // K x V
  TopicTotals topic_totals;                             // K
  Eigen::MatrixXd theta;                                // D x K
  Eigen::MatrixXd phi;                                  // K x V

  int num_topics() const { return config.num_topics; }
  Eigen::Index num_docs() const { return doc_topic.rows(); }
  Eigen::Index vocab_size() const { return topic_word.cols(); }
};

/// (n_dk + alpha) / (n_d + K alpha) and (n_kw + beta) / (n_k + V beta) from
/// the model's current counts.
Eigen::MatrixXd estimate_theta(const LdaModel& model);
Eigen::MatrixXd estimate_phi(const LdaModel& model);

// Recomputes every count table from the assignments and compares.
bool counts_consistent(const LdaModel& model, const BowCorpus& corpus);

struct SyntheticCorpus {
  BowCorpus corpus;
  Eigen::MatrixXd true_phi;    // K x V
  Eigen::MatrixXd true_theta;  // D x K
};

/// Draws from the LDA generative process. RNG order: phi rows 0..K-1, then for
/// each document its theta followed by (topic, word) per token. Terms are
/// named w000, w001, ...; document d gets id doc0000.. and year 2010 + d % 10.
SyntheticCorpus generate_synthetic(int num_topics, int vocab_size, int num_docs, int doc_length, double alpha,
                                   double beta, std::uint64_t seed);

/// Called after each completed sweep (1-based) with the live model; theta and
/// phi are not refreshed until training ends.
using SweepObserver = std::function<void(int sweep, const LdaModel& model)>;

/// Collapsed Gibbs sampling. Initial topics drawn uniformly per token in
/// document/token order, then `iterations` sweeps in the same order with
///   p(z = k | rest) ∝ (n_dk + alpha)(n_kw + beta) / (n_k + V beta).
LdaModel train_gibbs(const BowCorpus& corpus, const LdaConfig& config, const SweepObserver& observer = {});

// Σ_d Σ_tokens ln Σ_k theta_dk phi_kw, in nats.
double log_likelihood(const LdaModel& model, const BowCorpus& corpus);

struct TopicTerm {
  std::int32_t index = 0;
  std::string term;
  double percent = 0.0;
};

struct TopicSummary {
  int topic = 0;
  std::optional<std::string> label;
  std::vector<TopicTerm> terms;
};

// Top `n` indices of one phi row, probability descending, ties by index.
std::vector<std::int32_t> top_term_indices(const Eigen::Ref<const Eigen::RowVectorXd>& row, std::size_t n);

/// n > V returns all V terms.
TopicSummary top_words(const LdaModel& model, const Vocabulary& vocab, int topic, std::size_t n);

std::string model_to_json(const LdaModel& model);
LdaModel model_from_json(const std::string& text);
void save_model(const LdaModel& model, const std::filesystem::path& path);
LdaModel load_model(const std::filesystem::path& path);

/// Compact little-endian binary form; doubles stored bit-exact.
std::vector<char> model_to_binary(const LdaModel& model);
LdaModel model_from_binary(const std::vector<char>& bytes);

}  // namespace topicscope
