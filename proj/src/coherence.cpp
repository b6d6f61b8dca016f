#include "topicscope/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "topicscope/error.hpp"
#include "topicscope/parallel.hpp"
#include "topicscope/rng.hpp"

namespace topicscope {
namespace {

using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct Counter {
  explicit Counter(Eigen::Index m) : single(CountVector::Zero(m)), joint(CountMatrix::Zero(m, m)) {}

  void add_unit(const std::vector<Eigen::Index>& present) {
    ++units;
    for (std::size_t a = 0; a < present.size(); ++a) {
      ++single[present[a]];
      for (std::size_t b = 0; b < present.size(); ++b) ++joint(present[a], present[b]);
    }
  }

  std::int64_t units = 0;
  CountVector single;
  CountMatrix joint;
};

void count_document(const BowDocument& doc, const std::vector<Eigen::Index>& local, ProbabilityMode mode,
                    std::size_t window, Counter& counter) {
  const auto m = counter.single.size();
  std::vector<Eigen::Index> present;
  auto local_of = [&](std::int32_t term) -> Eigen::Index {
    return term >= 0 && static_cast<std::size_t>(term) < local.size() ? local[term] : -1;
  };
  if (mode == ProbabilityMode::bool_doc || doc.tokens.size() <= window) {
    std::vector<bool> seen(static_cast<std::size_t>(m), false);
    for (const auto t : doc.tokens) {
      const auto i = local_of(t);
      if (i >= 0 && !seen[i]) {
        seen[i] = true;
        present.push_back(i);
      }
    }
    std::sort(present.begin(), present.end());
    counter.add_unit(present);
    return;
  }
  std::vector<std::int64_t> in_window(static_cast<std::size_t>(m), 0);
  for (std::size_t n = 0; n < window; ++n) {
    if (const auto i = local_of(doc.tokens[n]); i >= 0) ++in_window[i];
  }
  for (std::size_t start = 0;; ++start) {
    present.clear();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (in_window[i] > 0) present.push_back(i);
    }
    counter.add_unit(present);
    const std::size_t next = start + window;
    if (next >= doc.tokens.size()) break;
    if (const auto i = local_of(doc.tokens[start]); i >= 0) --in_window[i];
    if (const auto i = local_of(doc.tokens[next]); i >= 0) ++in_window[i];
  }
}

double cosine_or_zero(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double denom = a.norm() * b.norm();
  return denom > 0.0 ? a.dot(b) / denom : 0.0;
}

}  // namespace

CoherenceMeasure parse_coherence_measure(const std::string& name) {
  if (name == "u_mass") return CoherenceMeasure::u_mass;
  if (name == "c_npmi_window") return CoherenceMeasure::c_npmi_window;
  throw ValidationError("unknown coherence measure '" + name + "' (expected u_mass or c_npmi_window)");
}

std::string to_string(CoherenceMeasure measure) {
  return measure == CoherenceMeasure::u_mass ? "u_mass" : "c_npmi_window";
}

double CoherenceConfig::effective_epsilon() const {
  if (epsilon) return *epsilon;
  return measure == CoherenceMeasure::u_mass ? 1.0 : 1e-12;
}

void CoherenceConfig::validate() const {
  if (measure == CoherenceMeasure::c_npmi_window && window < 2)
    throw ValidationError("coherence window must be >= 2");
  if (top_n < 2) throw ValidationError("coherence top_n must be >= 2");
  if (epsilon && !(*epsilon > 0.0)) throw ValidationError("coherence epsilon must be > 0");
}

std::vector<Segment> segment(std::size_t num_words, SegmentationScheme scheme) {
  std::vector<Segment> out;
  if (scheme == SegmentationScheme::one_pre) {
    for (std::size_t i = 1; i < num_words; ++i)
      for (std::size_t j = 0; j < i; ++j) out.push_back({i, {j}});
    return out;
  }
  std::vector<std::size_t> all(num_words);
  for (std::size_t i = 0; i < num_words; ++i) all[i] = i;
  for (std::size_t i = 0; i < num_words; ++i) out.push_back({i, all});
  return out;
}

OccurrenceTable estimate_probabilities(const BowCorpus& corpus, const std::vector<std::int32_t>& words,
                                       ProbabilityMode mode, int window, int threads) {
  if (mode == ProbabilityMode::bool_window && window < 1) throw ValidationError("window must be >= 1");
  const auto m = static_cast<Eigen::Index>(words.size());
  std::vector<Eigen::Index> local(corpus.vocab_size(), -1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto w = words[i];
    if (w < 0 || static_cast<std::size_t>(w) >= local.size()) continue;
    if (local[w] >= 0) throw ValidationError("word list contains a repeated term");
    local[w] = i;
  }

  const std::size_t num_docs = corpus.num_docs();
  const std::size_t chunks = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                     std::max<std::size_t>(num_docs, 1));
  std::vector<Counter> partial(chunks, Counter(m));
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t begin = num_docs * c / chunks;
    const std::size_t end = num_docs * (c + 1) / chunks;
    for (std::size_t d = begin; d < end; ++d)
      count_document(corpus.docs[d], local, mode, static_cast<std::size_t>(window), partial[c]);
  });

  OccurrenceTable table;
  table.single = CountVector::Zero(m);
  table.joint = CountMatrix::Zero(m, m);
  for (const auto& p : partial) {
    table.num_units += p.units;
    table.single += p.single;
    table.joint += p.joint;
  }
  return table;
}

double confirmation_npmi(double p_ij, double p_i, double p_j, double epsilon) {
  if (p_ij >= 1.0) return 1.0;
  // As with u_mass, a word absent from the reference corpus carries no evidence.
  if (p_i * p_j <= 0.0) return 0.0;
  const double joint = p_ij + epsilon;
  const double denom = -std::log(joint);
  if (!(denom > 0.0)) return 1.0;
  return std::clamp(std::log(joint / (p_i * p_j)) / denom, -1.0, 1.0);
}

double word_list_coherence(const OccurrenceTable& table, const CoherenceConfig& config) {
  const auto m = table.single.size();
  const double eps = config.effective_epsilon();
  double total = 0.0;
  std::size_t segments = 0;
  if (config.measure == CoherenceMeasure::u_mass) {
    for (const auto& s : segment(static_cast<std::size_t>(m), SegmentationScheme::one_pre)) {
      const auto i = static_cast<Eigen::Index>(s.subject);
      const auto j = static_cast<Eigen::Index>(s.condition.front());
      // A condition word absent from the reference corpus carries no evidence.
      if (table.single[j] > 0) total += std::log((static_cast<double>(table.joint(i, j)) + eps) /
                                                 static_cast<double>(table.single[j]));
      ++segments;
    }
  } else {
    Eigen::MatrixXd npmi(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) npmi(i, j) = confirmation_npmi(table.p(i, j), table.p(i), table.p(j), eps);
    for (const auto& s : segment(static_cast<std::size_t>(m), SegmentationScheme::one_set)) {
      Eigen::VectorXd condition = Eigen::VectorXd::Zero(m);
      for (const auto j : s.condition) condition += npmi.row(static_cast<Eigen::Index>(j)).transpose();
      total += cosine_or_zero(npmi.row(static_cast<Eigen::Index>(s.subject)).transpose(), condition);
      ++segments;
    }
  }
  return segments ? total / static_cast<double>(segments) : 0.0;
}

CoherenceResult coherence_of_word_lists(const std::vector<std::vector<std::int32_t>>& topics,
                                        const BowCorpus& corpus, const CoherenceConfig& config, int threads) {
  config.validate();
  const auto mode =
      config.measure == CoherenceMeasure::u_mass ? ProbabilityMode::bool_doc : ProbabilityMode::bool_window;
  CoherenceResult result;
  result.num_topics = static_cast<int>(topics.size());
  for (const auto& words : topics) {
    const auto table = estimate_probabilities(corpus, words, mode, config.window, threads);
    result.per_topic.push_back(word_list_coherence(table, config));
  }
  double sum = 0.0;
  for (const double s : result.per_topic) sum += s;
  result.aggregate = result.per_topic.empty() ? 0.0 : sum / static_cast<double>(result.per_topic.size());
  return result;
}

CoherenceResult coherence_score(const LdaModel& model, const BowCorpus& corpus, const CoherenceConfig& config,
                                int threads) {
  config.validate();
  if (model.phi.cols() != static_cast<Eigen::Index>(corpus.vocab_size()))
    throw ValidationError("model and corpus vocabularies differ in size");
  if (config.top_n > model.phi.cols())
    throw ValidationError("coherence top_n " + std::to_string(config.top_n) + " exceeds vocabulary size " +
                          std::to_string(model.phi.cols()));
  std::vector<std::vector<std::int32_t>> topics;
  for (int k = 0; k < model.num_topics(); ++k)
    topics.push_back(top_term_indices(model.phi.row(k), static_cast<std::size_t>(config.top_n)));
  return coherence_of_word_lists(topics, corpus, config, threads);
}

std::uint64_t sweep_seed(std::uint64_t base, int num_topics, int run) {
  return mix_seed(base ^ mix_seed((static_cast<std::uint64_t>(num_topics) << 32) | static_cast<std::uint32_t>(run)));
}

SweepResult sweep_topic_numbers(const BowCorpus& corpus, int k_min, int k_max, const LdaConfig& lda_template,
                                const CoherenceConfig& coherence, int seeds_per_k, int threads) {
  if (k_min > k_max) throw ValidationError("topic range is empty");
  if (k_min < 2) throw ValidationError("topic range must start at K >= 2");
  if (seeds_per_k < 1) throw ValidationError("seeds_per_k must be >= 1");
  coherence.validate();

  SweepResult result;
  for (int k = k_min; k <= k_max; ++k) {
    SweepEntry entry;
    entry.num_topics = k;
    for (int s = 0; s < seeds_per_k; ++s) entry.seeds.push_back(sweep_seed(lda_template.seed, k, s));
    entry.runs.resize(static_cast<std::size_t>(seeds_per_k));
    result.entries.push_back(std::move(entry));
  }
  const auto per_k = static_cast<std::size_t>(seeds_per_k);
  parallel_for(result.entries.size() * per_k, threads, [&](std::size_t task) {
    auto& entry = result.entries[task / per_k];
    LdaConfig config = lda_template;
    config.num_topics = entry.num_topics;
    config.seed = entry.seeds[task % per_k];
    const auto model = train_gibbs(corpus, config);
    entry.runs[task % per_k] = coherence_score(model, corpus, coherence);
  });

  double best = 0.0;
  for (auto& entry : result.entries) {
    double sum = 0.0;
    for (const auto& run : entry.runs) sum += run.aggregate;
    entry.mean_coherence = sum / static_cast<double>(entry.runs.size());
    if (result.best_num_topics == 0 || entry.mean_coherence > best) {
      best = entry.mean_coherence;
      result.best_num_topics = entry.num_topics;
    }
  }
  return result;
}

}  // namespace topicscope
