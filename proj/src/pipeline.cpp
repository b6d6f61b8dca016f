#include "topicscope/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "topicscope/cooccur.hpp"
#include "topicscope/distance.hpp"
#include "topicscope/error.hpp"
#include "topicscope/rng.hpp"
#include "topicscope/trends.hpp"

namespace topicscope {
namespace {

using json = nlohmann::json;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory '" + dir.string() + "'");
}

void require_file(const std::filesystem::path& path, const char* what) {
  if (!std::filesystem::is_regular_file(path)) throw IoError(std::string(what) + " not found: '" + path.string() + "'");
}

std::vector<std::string> resolve_labels(const PipelineConfig& config, int num_topics) {
  std::vector<std::string> labels(static_cast<std::size_t>(num_topics));
  for (int k = 0; k < num_topics; ++k) {
    const auto i = static_cast<std::size_t>(k);
    labels[i] = i < config.topic_labels.size() && !config.topic_labels[i].empty() ? config.topic_labels[i]
                                                                                   : default_topic_label(k);
  }
  return labels;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  if (path.empty()) return {};
  require_file(path, "stop word file");
  const auto terms = load_term_list(path);
  return {terms.begin(), terms.end()};
}

json pairs_json(const std::vector<TopicPair>& pairs, std::size_t limit) {
  json out = json::array();
  for (std::size_t i = 0; i < std::min(limit, pairs.size()); ++i)
    out.push_back({pairs[i].first, pairs[i].second, pairs[i].value});
  return out;
}

}  // namespace

IngestReport cmd_ingest(const PipelineConfig& config) {
  config.validate();
  if (config.input.empty()) throw ValidationError("no input records file configured");
  require_file(config.input, "input file");
  StopwordSets stopwords;
  stopwords[Language::en] = load_stopwords(config.stopwords_en);
  stopwords[Language::other] = stopwords[Language::en];
  stopwords[Language::zh] = load_stopwords(config.stopwords_zh);
  Lexicon lexicon;
  if (!config.lexicon.empty()) {
    require_file(config.lexicon, "lexicon file");
    lexicon = Lexicon(load_term_list(config.lexicon));
  }
  ensure_directory(config.out);

  IngestReport report;
  auto records = load_records(config.input, config.input_format);
  report.records = records.size();
  if (config.language != "all") {
    const auto lang = parse_language(config.language);
    std::erase_if(records, [lang](const RawRecord& r) { return r.language != lang; });
  }
  report.filtered_language = report.records - records.size();

  PreprocessOptions options;
  options.min_token_len = config.min_token_len;
  options.include_title = config.include_title;
  options.keep_numeric = config.keep_numeric;
  options.lexicon = lexicon.empty() ? nullptr : &lexicon;
  auto pre = preprocess(records, stopwords, options);
  report.dropped_empty = pre.dropped_ids.size();
  if (pre.docs.empty()) throw ValidationError("empty corpus: no record has any token left after preprocessing");

  const auto vocab = build_vocabulary(pre.docs, config.min_df, config.max_df_ratio);
  auto bow = to_bow(pre.docs, vocab);
  report.dropped_oov = bow.dropped_ids.size();
  if (bow.corpus.num_docs() == 0) throw ValidationError("empty corpus: no document has an in-vocabulary token");
  report.documents = bow.corpus.num_docs();
  report.vocabulary = bow.corpus.vocab_size();
  report.tokens = bow.corpus.total_tokens();

  save_corpus(bow.corpus, config.corpus_path());
  json stats = {{"records", report.records},
                {"filtered_language", report.filtered_language},
                {"dropped_empty", report.dropped_empty},
                {"dropped_empty_ids", pre.dropped_ids},
                {"dropped_out_of_vocabulary", report.dropped_oov},
                {"dropped_out_of_vocabulary_ids", bow.dropped_ids},
                {"documents", report.documents},
                {"vocabulary", report.vocabulary},
                {"tokens", report.tokens}};
  write_text(config.out / files::ingest_stats, stats.dump(1) + "\n");
  return report;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "K,seed,per_topic_scores,mean_coherence\n";
  for (const auto& entry : sweep.entries) {
    for (std::size_t s = 0; s < entry.runs.size(); ++s) {
      std::string scores = "[";
      for (std::size_t k = 0; k < entry.runs[s].per_topic.size(); ++k)
        scores += (k ? "," : "") + num(entry.runs[s].per_topic[k]);
      scores += "]";
      out += std::to_string(entry.num_topics) + "," + std::to_string(entry.seeds[s]) + "," + csv_field(scores) + "," +
             num(entry.runs[s].aggregate) + "\n";
    }
  }
  return out;
}

std::string sweep_plot_csv(const SweepResult& sweep) {
  std::string out = "K,mean_coherence\n";
  for (const auto& entry : sweep.entries) out += std::to_string(entry.num_topics) + "," + num(entry.mean_coherence) + "\n";
  return out;
}

SweepResult cmd_sweep(const PipelineConfig& config) {
  config.validate();
  require_file(config.corpus_path(), "corpus bundle");
  const auto corpus = load_corpus(config.corpus_path());
  ensure_directory(config.out);
  const auto result = sweep_topic_numbers(corpus, config.k_min, config.k_max, config.lda_config(config.k_min),
                                          config.coherence, config.seeds_per_k, config.threads);
  write_text(config.out / files::sweep, sweep_csv(result));
  write_text(config.out / files::sweep_plot, sweep_plot_csv(result));
  return result;
}

void write_reports(const LdaModel& model, const BowCorpus& corpus, const PipelineConfig& config) {
  if (model.theta.rows() != static_cast<Eigen::Index>(corpus.num_docs()) ||
      model.phi.cols() != static_cast<Eigen::Index>(corpus.vocab_size()))
    throw ValidationError("model does not match the corpus bundle");
  ensure_directory(config.out);
  const int k = model.num_topics();
  const auto labels = resolve_labels(config, k);
  const auto& out = config.out;

  std::string topics = "topic,label,rank,term,weight_percent\n";
  for (int t = 0; t < k; ++t) {
    const auto summary = top_words(model, corpus.vocabulary, t, static_cast<std::size_t>(config.top_words));
    for (std::size_t r = 0; r < summary.terms.size(); ++r)
      topics += std::to_string(t) + "," + csv_field(labels[t]) + "," + std::to_string(r + 1) + "," +
                csv_field(summary.terms[r].term) + "," + fixed(summary.terms[r].percent, 4) + "\n";
  }
  write_text(out / files::topics, topics);

  std::string coherence_csv = "topic,label,coherence\n";
  std::optional<CoherenceResult> coherence;
  if (corpus.vocab_size() >= 2) {
    auto cc = config.coherence;
    cc.top_n = std::min<int>(cc.top_n, static_cast<int>(corpus.vocab_size()));
    coherence = coherence_score(model, corpus, cc, config.threads);
    for (int t = 0; t < k; ++t)
      coherence_csv += std::to_string(t) + "," + csv_field(labels[t]) + "," + num(coherence->per_topic[t]) + "\n";
  }
  write_text(out / files::coherence, coherence_csv);

  std::string doc_topics = "id,year,dominant_topic,main_topics";
  for (int t = 0; t < k; ++t) doc_topics += ",theta_" + std::to_string(t);
  doc_topics += "\n";
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto row = model.theta.row(static_cast<Eigen::Index>(d));
    Eigen::Index dominant = 0;
    for (Eigen::Index t = 1; t < row.size(); ++t) {
      if (row[t] > row[dominant]) dominant = t;
    }
    std::string mains;
    for (const int t : main_topics(row, config.cooccur_threshold)) mains += (mains.empty() ? "" : ";") + std::to_string(t);
    doc_topics += csv_field(corpus.docs[d].id) + "," + std::to_string(corpus.docs[d].year) + "," +
                  std::to_string(dominant) + "," + mains;
    for (Eigen::Index t = 0; t < row.size(); ++t) doc_topics += "," + fixed(row[t], 6);
    doc_topics += "\n";
  }
  write_text(out / files::doc_topics, doc_topics);

  const auto kl = topic_distance_matrix(model, DistanceKind::kl);
  const auto cosine = topic_distance_matrix(model, DistanceKind::cosine);
  write_text(out / files::distance_kl, distance_matrix_csv(kl));
  write_text(out / files::distance_kl_meta, distance_matrix_metadata(kl));
  write_text(out / files::distance_cosine, distance_matrix_csv(cosine));
  write_text(out / files::distance_cosine_meta, distance_matrix_metadata(cosine));

  auto graph = build_cooccurrence_graph(model, config.cooccur_threshold);
  graph.labels = labels;
  export_gexf(graph, out / files::gexf);
  write_text(out / files::edges, edge_list_csv(graph));
  const auto metrics = graph_metrics(graph);
  std::string metrics_csv = "topic,label,documents,degree,weighted_degree\n";
  for (int t = 0; t < k; ++t)
    metrics_csv += std::to_string(t) + "," + csv_field(labels[t]) + "," + std::to_string(graph.node_docs[t]) + "," +
                   std::to_string(metrics.degree[t]) + "," + std::to_string(metrics.weighted_degree[t]) + "\n";
  write_text(out / files::graph_metrics, metrics_csv);

  emit_trend_outputs(annual_counts(corpus), labels, out / files::trend_annual, "Documents per year");
  emit_trend_outputs(topic_annual_counts(model, corpus, config.trend_rule, config.cooccur_threshold), labels,
                     out / files::trend_topics, "Documents per topic and year");

  json summary = {{"num_topics", k},
                  {"num_docs", corpus.num_docs()},
                  {"vocabulary", corpus.vocab_size()},
                  {"log_likelihood", log_likelihood(model, corpus)},
                  {"labels", labels},
                  {"graph", {{"edges", graph.edges.size()},
                             {"density", metrics.density},
                             {"density_defined", metrics.density_defined}}}};
  if (coherence) {
    summary["coherence"] = {{"measure", to_string(config.coherence.measure)},
                            {"aggregate", coherence->aggregate},
                            {"per_topic", coherence->per_topic}};
  }
  if (k >= 2) {
    summary["most_similar_pairs"] = {{"cosine", pairs_json(rank_pairs(cosine, PairOrder::most_similar), 3)},
                                     {"kl", pairs_json(rank_pairs(kl, PairOrder::most_similar), 3)}};
  }
  write_text(out / files::summary, summary.dump(1) + "\n");
}

LdaModel cmd_analyze(const PipelineConfig& config) {
  config.validate();
  if (!config.topics) throw ValidationError("no topic count configured (set 'topics' or run the sweep first)");
  require_file(config.corpus_path(), "corpus bundle");
  const auto corpus = load_corpus(config.corpus_path());
  ensure_directory(config.out);
  auto model = train_gibbs(corpus, config.lda_config(*config.topics));
  save_model(model, config.model_path());
  write_reports(model, corpus, config);
  return model;
}

void cmd_export(const PipelineConfig& config) {
  config.validate();
  require_file(config.corpus_path(), "corpus bundle");
  require_file(config.model_path(), "model file");
  write_reports(load_model(config.model_path()), load_corpus(config.corpus_path()), config);
}

int cmd_run_all(const PipelineConfig& config) {
  cmd_ingest(config);
  const auto sweep = cmd_sweep(config);
  auto analyze = config;
  if (!analyze.topics) analyze.topics = sweep.best_num_topics;
  cmd_analyze(analyze);
  return *analyze.topics;
}

std::vector<RawRecord> make_sample_records(std::size_t count, std::uint64_t seed) {
  static const std::vector<std::vector<std::string>> themes = {
      {"drawing", "model", "bim", "extraction", "geometry", "component", "ifc", "element", "attribute", "floor",
       "plan", "layer", "parameter", "wall", "recognition", "semantic", "image", "dimension"},
      {"clause", "regulation", "code", "database", "requirement", "compliance", "standard", "knowledge", "ontology",
       "provision", "query", "library", "constraint", "interpretation", "norm", "logic", "text", "specification"},
      {"user", "interface", "interaction", "display", "terminal", "device", "report", "visualization", "feedback",
       "screen", "mobile", "platform", "server", "cloud", "operation", "input", "network", "prompt"}};
  static const std::vector<std::string> filler = {"the",  "of",   "and",   "a",     "for",  "to",
                                                  "in",   "is",   "with",  "on",    "by",   "which",
                                                  "this", "from", "method", "system", "checking"};
  static const char* title_forms[] = {"Method for %s %s checking", "System and device for %s %s",
                                      "Automatic %s %s review method"};

  Rng rng(seed);
  std::vector<RawRecord> out;
  for (std::size_t i = 0; i < count; ++i) {
    const Eigen::VectorXd theta = rng.dirichlet(static_cast<Eigen::Index>(themes.size()), 0.3);
    std::vector<double> cumulative;
    double run = 0.0;
    for (Eigen::Index t = 0; t < theta.size(); ++t) cumulative.push_back(run += theta[t]);

    std::vector<std::string> words;
    const std::size_t length = 45 + rng.index(30);
    for (std::size_t n = 0; n < length; ++n) {
      if (rng.uniform01() < 0.3) {
        words.push_back(filler[rng.index(filler.size())]);
        continue;
      }
      const auto& pool = themes[rng.categorical_from_cumulative(cumulative)];
      // Zipf-like preference for the head of each pool.
      std::vector<double> weights;
      double acc = 0.0;
      for (std::size_t r = 0; r < pool.size(); ++r) weights.push_back(acc += 1.0 / static_cast<double>(r + 1));
      words.push_back(pool[rng.categorical_from_cumulative(weights)]);
    }
    std::string text;
    for (std::size_t n = 0; n < words.size(); ++n) {
      std::string w = words[n];
      const bool sentence_start = n % 12 == 0;
      if (sentence_start) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      text += w;
      if (n + 1 == words.size() || (n + 1) % 12 == 0) {
        text += n + 1 == words.size() ? "." : ". ";
      } else {
        text += (n % 5 == 3) ? ", " : " ";
      }
    }
    Eigen::Index dominant = 0;
    theta.maxCoeff(&dominant);
    const auto& pool = themes[static_cast<std::size_t>(dominant)];
    char title[128];
    std::snprintf(title, sizeof title, title_forms[dominant], pool[0].c_str(), pool[1 + rng.index(3)].c_str());
    char id[32];
    std::snprintf(id, sizeof id, "S%04zu", i + 1);
    RawRecord r;
    r.id = id;
    // Later years are more frequent.
    r.year = 2011 + static_cast<int>(std::floor(11.0 * std::sqrt(rng.uniform01())));
    r.language = Language::en;
    r.title = title;
    r.abstract_text = text;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace topicscope
