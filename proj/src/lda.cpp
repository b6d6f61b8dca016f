#include "topicscope/lda.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "topicscope/error.hpp"
#include "topicscope/rng.hpp"

namespace topicscope {

void LdaConfig::validate() const {
  if (num_topics < 1) throw ValidationError("topic count must be >= 1");
  if (alpha && !(*alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (!(beta > 0.0)) throw ValidationError("beta must be > 0");
  if (iterations < 1) throw ValidationError("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) throw ValidationError("burn_in must be in [0, iterations)");
}

Eigen::MatrixXd estimate_theta(const LdaModel& model) {
  const double alpha = model.config.effective_alpha();
  const double k_alpha = alpha * model.num_topics();
  Eigen::MatrixXd theta = model.doc_topic.cast<double>().array() + alpha;
  for (Eigen::Index d = 0; d < theta.rows(); ++d) {
    const double length = static_cast<double>(model.doc_topic.row(d).cast<std::int64_t>().sum());
    theta.row(d) /= length + k_alpha;
  }
  return theta;
}

Eigen::MatrixXd estimate_phi(const LdaModel& model) {
  const double beta = model.config.beta;
  const double v_beta = beta * static_cast<double>(model.vocab_size());
  Eigen::MatrixXd phi = model.topic_word.cast<double>().array() + beta;
  for (Eigen::Index k = 0; k < phi.rows(); ++k) phi.row(k) /= static_cast<double>(model.topic_totals[k]) + v_beta;
  return phi;
}

bool counts_consistent(const LdaModel& model, const BowCorpus& corpus) {
  const auto num_docs = static_cast<Eigen::Index>(corpus.num_docs());
  const int num_topics = model.num_topics();
  if (model.doc_topic.rows() != num_docs || model.doc_topic.cols() != num_topics) return false;
  if (model.topic_word.rows() != num_topics ||
      model.topic_word.cols() != static_cast<Eigen::Index>(corpus.vocab_size()))
    return false;
  if (model.assignments.size() != corpus.num_docs()) return false;
  DocTopicCounts doc_topic = DocTopicCounts::Zero(num_docs, num_topics);
  TopicWordCounts topic_word = TopicWordCounts::Zero(num_topics, model.topic_word.cols());
  for (Eigen::Index d = 0; d < num_docs; ++d) {
    const auto& tokens = corpus.docs[d].tokens;
    const auto& z = model.assignments[d];
    if (z.size() != tokens.size()) return false;
    for (std::size_t n = 0; n < z.size(); ++n) {
      if (z[n] < 0 || z[n] >= num_topics) return false;
      ++doc_topic(d, z[n]);
      ++topic_word(z[n], tokens[n]);
    }
    if (model.doc_topic.row(d).cast<std::int64_t>().sum() != corpus.docs[d].length()) return false;
  }
  if (doc_topic != model.doc_topic || topic_word != model.topic_word) return false;
  if ((model.doc_topic.array() < 0).any() || (model.topic_word.array() < 0).any()) return false;
  for (int k = 0; k < num_topics; ++k) {
    if (model.topic_word.row(k).cast<std::int64_t>().sum() != model.topic_totals[k]) return false;
    if (model.doc_topic.col(k).cast<std::int64_t>().sum() != model.topic_totals[k]) return false;
  }
  return true;
}

SyntheticCorpus generate_synthetic(int num_topics, int vocab_size, int num_docs, int doc_length, double alpha,
                                   double beta, std::uint64_t seed) {
  if (num_topics < 1 || vocab_size < 1 || num_docs < 1 || doc_length < 1)
    throw ValidationError("synthetic corpus dimensions must all be >= 1");
  if (!(alpha > 0.0) || !(beta > 0.0)) throw ValidationError("Dirichlet concentrations must be > 0");
  Rng rng(seed);
  SyntheticCorpus out;
  out.true_phi.resize(num_topics, vocab_size);
  for (int k = 0; k < num_topics; ++k) out.true_phi.row(k) = rng.dirichlet(vocab_size, beta).transpose();

  auto cumulative = [](const auto& probs) {
    std::vector<double> c(static_cast<std::size_t>(probs.size()));
    double run = 0.0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) c[i] = run += probs[i];
    return c;
  };
  std::vector<std::vector<double>> phi_cumulative;
  for (int k = 0; k < num_topics; ++k) phi_cumulative.push_back(cumulative(out.true_phi.row(k)));

  std::vector<std::int64_t> doc_freq(vocab_size, 0), coll_freq(vocab_size, 0);
  out.true_theta.resize(num_docs, num_topics);
  for (int d = 0; d < num_docs; ++d) {
    out.true_theta.row(d) = rng.dirichlet(num_topics, alpha).transpose();
    const auto theta_cumulative = cumulative(out.true_theta.row(d));
    char id[32];
    std::snprintf(id, sizeof id, "doc%04d", d);
    BowDocument doc{id, 2010 + d % 10, {}, {}};
    doc.tokens.reserve(doc_length);
    for (int n = 0; n < doc_length; ++n) {
      const auto topic = rng.categorical_from_cumulative(theta_cumulative);
      doc.tokens.push_back(static_cast<std::int32_t>(rng.categorical_from_cumulative(phi_cumulative[topic])));
    }
    doc.counts = count_terms(doc.tokens);
    for (const auto& [term, count] : doc.counts) {
      ++doc_freq[term];
      coll_freq[term] += count;
    }
    out.corpus.docs.push_back(std::move(doc));
  }
  std::vector<std::string> terms;
  for (int w = 0; w < vocab_size; ++w) {
    char term[32];
    std::snprintf(term, sizeof term, "w%03d", w);
    terms.emplace_back(term);
  }
  out.corpus.vocabulary = make_vocabulary(std::move(terms), std::move(doc_freq), std::move(coll_freq));
  return out;
}

LdaModel train_gibbs(const BowCorpus& corpus, const LdaConfig& config, const SweepObserver& observer) {
  config.validate();
  if (corpus.num_docs() == 0) throw ValidationError("cannot train on an empty corpus");
  if (corpus.vocab_size() == 0) throw ValidationError("cannot train with an empty vocabulary");
  const int num_topics = config.num_topics;
  if (num_topics > corpus.total_tokens())
    throw ValidationError("topic count " + std::to_string(num_topics) + " exceeds total token count " +
                          std::to_string(corpus.total_tokens()));

  LdaModel model;
  model.config = config;
  model.config.alpha = config.effective_alpha();
  const double alpha = *model.config.alpha;
  const double beta = config.beta;
  const auto num_docs = static_cast<Eigen::Index>(corpus.num_docs());
  const auto vocab_size = static_cast<Eigen::Index>(corpus.vocab_size());
  const double v_beta = beta * static_cast<double>(vocab_size);

  model.doc_topic = DocTopicCounts::Zero(num_docs, num_topics);
  model.topic_word = TopicWordCounts::Zero(num_topics, vocab_size);
  model.topic_totals = TopicTotals::Zero(num_topics);
  model.assignments.resize(corpus.num_docs());

  Rng rng(config.seed);
  for (Eigen::Index d = 0; d < num_docs; ++d) {
    const auto& tokens = corpus.docs[d].tokens;
    auto& z = model.assignments[d];
    z.resize(tokens.size());
    for (std::size_t n = 0; n < tokens.size(); ++n) {
      const auto k = static_cast<std::int32_t>(rng.index(num_topics));
      z[n] = k;
      ++model.doc_topic(d, k);
      ++model.topic_word(k, tokens[n]);
      ++model.topic_totals[k];
    }
  }

  Eigen::MatrixXd theta_sum, phi_sum;
  int averaged = 0;
  std::vector<double> cumulative(num_topics);
  for (int sweep = 1; sweep <= config.iterations; ++sweep) {
    for (Eigen::Index d = 0; d < num_docs; ++d) {
      const auto& tokens = corpus.docs[d].tokens;
      auto& z = model.assignments[d];
      std::int32_t* doc_row = model.doc_topic.row(d).data();
      for (std::size_t n = 0; n < tokens.size(); ++n) {
        const auto w = tokens[n];
        std::int32_t* word_col = model.topic_word.col(w).data();
        const auto old_k = z[n];
        --doc_row[old_k];
        --word_col[old_k];
        --model.topic_totals[old_k];

        double run = 0.0;
        for (int k = 0; k < num_topics; ++k) {
          run += (doc_row[k] + alpha) * (word_col[k] + beta) /
                 (static_cast<double>(model.topic_totals[k]) + v_beta);
          cumulative[k] = run;
        }
        const auto new_k = static_cast<std::int32_t>(rng.categorical_from_cumulative(cumulative));
        z[n] = new_k;
        ++doc_row[new_k];
        ++word_col[new_k];
        ++model.topic_totals[new_k];
      }
    }
    if (config.average_after_burn_in && sweep > config.burn_in) {
      if (averaged == 0) {
        theta_sum = estimate_theta(model);
        phi_sum = estimate_phi(model);
      } else {
        theta_sum += estimate_theta(model);
        phi_sum += estimate_phi(model);
      }
      ++averaged;
    }
    if (observer) observer(sweep, model);
  }

  if (averaged > 0) {
    model.theta = theta_sum / averaged;
    model.phi = phi_sum / averaged;
  } else {
    model.theta = estimate_theta(model);
    model.phi = estimate_phi(model);
  }
  return model;
}

double log_likelihood(const LdaModel& model, const BowCorpus& corpus) {
  if (model.phi.cols() != static_cast<Eigen::Index>(corpus.vocab_size()))
    throw ValidationError("vocabulary size mismatch: model has " + std::to_string(model.phi.cols()) +
                          " terms, corpus has " + std::to_string(corpus.vocab_size()));
  if (model.theta.rows() != static_cast<Eigen::Index>(corpus.num_docs()))
    throw ValidationError("document count mismatch between model and corpus");
  double total = 0.0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    for (const auto& [w, count] : corpus.docs[d].counts)
      total += count * std::log(model.theta.row(d).dot(model.phi.col(w)));
  }
  return total;
}

std::vector<std::int32_t> top_term_indices(const Eigen::Ref<const Eigen::RowVectorXd>& row, std::size_t n) {
  std::vector<std::int32_t> idx(static_cast<std::size_t>(row.size()));
  std::iota(idx.begin(), idx.end(), 0);
  n = std::min(n, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(),
                    [&](std::int32_t a, std::int32_t b) { return row[a] > row[b] || (row[a] == row[b] && a < b); });
  idx.resize(n);
  return idx;
}

TopicSummary top_words(const LdaModel& model, const Vocabulary& vocab, int topic, std::size_t n) {
  if (topic < 0 || topic >= model.num_topics())
    throw ValidationError("topic " + std::to_string(topic) + " out of range [0, " +
                          std::to_string(model.num_topics()) + ")");
  if (n < 1) throw ValidationError("number of top words must be >= 1");
  if (static_cast<Eigen::Index>(vocab.size()) != model.phi.cols())
    throw ValidationError("vocabulary does not match the model");
  TopicSummary summary;
  summary.topic = topic;
  for (const auto w : top_term_indices(model.phi.row(topic), n))
    summary.terms.push_back({w, vocab.terms[w], 100.0 * model.phi(topic, w)});
  return summary;
}

}  // namespace topicscope
