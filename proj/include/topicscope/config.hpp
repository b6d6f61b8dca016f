#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topicscope/coherence.hpp"
#include "topicscope/corpus.hpp"
#include "topicscope/lda.hpp"
#include "topicscope/trends.hpp"

namespace topicscope {

struct PipelineConfig {
  // ingest
  std::filesystem::path input;
  RecordFormat input_format = RecordFormat::jsonl;
  std::string language = "all";  // zh, en, other, or all
  std::filesystem::path stopwords_en;
  std::filesystem::path stopwords_zh;
  std::filesystem::path lexicon;
  std::optional<std::size_t> min_token_len;
  bool include_title = false;
  bool keep_numeric = false;
  std::int64_t min_df = 2;
  double max_df_ratio = 0.95;

  // modelling
  std::optional<int> topics;
  std::optional<double> alpha;
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 200;
  bool average_after_burn_in = false;
  CoherenceConfig coherence;
  int k_min = 2;
  int k_max = 10;
  int seeds_per_k = 3;

  // reporting
  double cooccur_threshold = 0.10;
  AttributionRule trend_rule = AttributionRule::dominant;
  int top_words = 10;
  std::vector<std::string> topic_labels;

  // paths and execution
  std::filesystem::path out = "out";
  std::filesystem::path corpus;  // defaults to <out>/corpus.json
  std::filesystem::path model;   // defaults to <out>/model.json
  std::uint64_t seed = 1;
  int threads = 1;

  std::filesystem::path corpus_path() const { return corpus.empty() ? out / "corpus.json" : corpus; }
  std::filesystem::path model_path() const { return model.empty() ? out / "model.json" : model; }
  LdaConfig lda_config(int num_topics) const;
  void validate() const;
};

struct ConfigKey {
  std::string name;
  std::string help;
  std::function<void(PipelineConfig&, const std::string&)> apply;
};

/// Every recognised key, in documentation order.
const std::vector<ConfigKey>& config_keys();

/// "key = value" lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Applies values in order; unknown keys and bad values raise ValidationError.
void apply_config_values(PipelineConfig& config, const std::map<std::string, std::string>& values);

// Relative paths in the file resolve against the file's directory.
PipelineConfig load_config_file(const std::filesystem::path& path);

}  // namespace topicscope
