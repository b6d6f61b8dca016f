#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "topicscope/coherence.hpp"
#include "topicscope/config.hpp"
#include "topicscope/corpus.hpp"
#include "topicscope/lda.hpp"

namespace topicscope {

/// Fixed output file names under the output directory.
namespace files {
inline constexpr const char* corpus = "corpus.json";
inline constexpr const char* ingest_stats = "ingest_stats.json";
inline constexpr const char* sweep = "sweep.csv";
inline constexpr const char* sweep_plot = "sweep_plot.csv";
inline constexpr const char* model = "model.json";
inline constexpr const char* topics = "topics.csv";
inline constexpr const char* coherence = "coherence.csv";
inline constexpr const char* doc_topics = "doc_topics.csv";
inline constexpr const char* distance_kl = "distance_kl.csv";
inline constexpr const char* distance_kl_meta = "distance_kl.meta";
inline constexpr const char* distance_cosine = "distance_cosine.csv";
inline constexpr const char* distance_cosine_meta = "distance_cosine.meta";
inline constexpr const char* gexf = "cooccurrence.gexf";
inline constexpr const char* edges = "cooccurrence_edges.csv";
inline constexpr const char* graph_metrics = "graph_metrics.csv";
inline constexpr const char* trend_annual = "trend_annual";  // .csv + .svg
inline constexpr const char* trend_topics = "trend_topics";  // .csv + .svg
inline constexpr const char* summary = "analysis_summary.json";
}  // namespace files

struct IngestReport {
  std::size_t records = 0;
  std::size_t filtered_language = 0;
  std::size_t dropped_empty = 0;      // no tokens left after preprocessing
  std::size_t dropped_oov = 0;        // no in-vocabulary tokens
  std::size_t documents = 0;
  std::size_t vocabulary = 0;
  std::int64_t tokens = 0;
};

/// load -> preprocess -> vocabulary -> bag of words; writes corpus.json and
/// ingest_stats.json.
IngestReport cmd_ingest(const PipelineConfig& config);

/// Writes sweep.csv and sweep_plot.csv; returns the full sweep.
SweepResult cmd_sweep(const PipelineConfig& config);

/// Trains at config.topics, writes model.json and every report file.
LdaModel cmd_analyze(const PipelineConfig& config);

/// Regenerates the report files from an existing corpus bundle and model.
void cmd_export(const PipelineConfig& config);

/// ingest, sweep, then analyze at config.topics or the recommended K.
int cmd_run_all(const PipelineConfig& config);

void write_reports(const LdaModel& model, const BowCorpus& corpus, const PipelineConfig& config);

std::string sweep_csv(const SweepResult& sweep);
std::string sweep_plot_csv(const SweepResult& sweep);

/// Deterministic English sample records built from three themed word pools.
std::vector<RawRecord> make_sample_records(std::size_t count = 50, std::uint64_t seed = 7);

}  // namespace topicscope
