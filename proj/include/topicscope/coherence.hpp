#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "topicscope/corpus.hpp"
#include "topicscope/lda.hpp"

namespace topicscope {

enum class CoherenceMeasure { u_mass, c_npmi_window };

CoherenceMeasure parse_coherence_measure(const std::string& name);
std::string to_string(CoherenceMeasure measure);

struct CoherenceConfig {
  CoherenceMeasure measure = CoherenceMeasure::c_npmi_window;
  int window = 110;
  int top_n = 10;
  // Unset picks 1 for u_mass (count smoothing) and 1e-12 for NPMI.
  std::optional<double> epsilon;

  double effective_epsilon() const;
  void validate() const;
};

struct CoherenceResult {
  int num_topics = 0;
  std::vector<double> per_topic;
  double aggregate = 0.0;
};

enum class SegmentationScheme { one_pre, one_set };

// Positions into the top-word list.
struct Segment {
  std::size_t subject = 0;
  std::vector<std::size_t> condition;

  bool operator==(const Segment&) const = default;
};

/// one_pre: (w_i, w_j) for every j < i; one_set: (w_i, all words).
std::vector<Segment> segment(std::size_t num_words, SegmentationScheme scheme);

enum class ProbabilityMode { bool_doc, bool_window };

/// Document (or window) occurrence counts for a fixed word list.
struct OccurrenceTable {
  std::int64_t num_units = 0;                 // documents or windows
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> single;  // units containing word i
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> joint;  // units containing i and j; diagonal = single

  double p(Eigen::Index i) const { return num_units ? double(single[i]) / double(num_units) : 0.0; }
  double p(Eigen::Index i, Eigen::Index j) const {
    return num_units ? double(joint(i, j)) / double(num_units) : 0.0;
  }
};

/// bool_window slides a width-`window` window with stride 1 over each
/// document's token sequence; a document shorter than the window is one
/// window. Term indices outside the corpus vocabulary never occur. Counting
/// is split over `threads` workers and merged by integer addition, so the
/// result does not depend on the thread count.
OccurrenceTable estimate_probabilities(const BowCorpus& corpus, const std::vector<std::int32_t>& words,
                                       ProbabilityMode mode, int window = 110, int threads = 1);

/// ln((p_ij + eps) / (p_i p_j)) / -ln(p_ij + eps), clamped to [-1, 1].
/// p_ij >= 1 (co-occurrence in every unit) gives 1; p_i p_j == 0 gives 0.
double confirmation_npmi(double p_ij, double p_i, double p_j, double epsilon);

/// Coherence of one ordered top-word list.
double word_list_coherence(const OccurrenceTable& table, const CoherenceConfig& config);

/// Top `top_n` words of every topic, scored against `corpus` (the training
/// corpus or any reference corpus over the same vocabulary).
CoherenceResult coherence_score(const LdaModel& model, const BowCorpus& corpus, const CoherenceConfig& config,
                                int threads = 1);

// Same pipeline starting from explicit top-word lists.
CoherenceResult coherence_of_word_lists(const std::vector<std::vector<std::int32_t>>& topics,
                                        const BowCorpus& corpus, const CoherenceConfig& config, int threads = 1);

struct SweepEntry {
  int num_topics = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<CoherenceResult> runs;  // one per seed
  double mean_coherence = 0.0;
};

struct SweepResult {
  std::vector<SweepEntry> entries;
  int best_num_topics = 0;  // argmax mean coherence, ties to smaller K
};

// Seed of the s-th run at topic count k, derived from the template seed.
std::uint64_t sweep_seed(std::uint64_t base, int num_topics, int run);

/// Trains one model per (K, seed) for K in [k_min, k_max] and scores each.
/// (K, seed) tasks run on up to `threads` workers; results are slotted by
/// index so output is independent of scheduling.
SweepResult sweep_topic_numbers(const BowCorpus& corpus, int k_min, int k_max, const LdaConfig& lda_template,
                                const CoherenceConfig& coherence, int seeds_per_k = 3, int threads = 1);

}  // namespace topicscope
