#include "topicscope/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "topicscope/error.hpp"

namespace topicscope {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size())
    throw ValidationError("config key '" + key + "': expected an integer, got '" + value + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  in.imbue(std::locale::classic());
  double out = 0.0;
  if (!(in >> out) || !(in >> std::ws).eof())
    throw ValidationError("config key '" + key + "': expected a number, got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ValidationError("config key '" + key + "': expected true or false, got '" + value + "'");
}

std::vector<std::string> split_labels(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto bar = value.find('|', start);
    out.push_back(trim(value.substr(start, bar == std::string::npos ? std::string::npos : bar - start)));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

using C = PipelineConfig;
using S = const std::string&;

#define TS_KEY(name, help, body) \
  ConfigKey { name, help, [](C& c, S v) { [[maybe_unused]] const std::string key = name; body; } }

std::vector<ConfigKey> make_keys() {
  return {
      TS_KEY("input", "records file (JSONL or CSV)", c.input = v),
      TS_KEY("input_format", "jsonl or csv", c.input_format = parse_record_format(v)),
      TS_KEY("language", "keep only records of this language: zh, en, other or all",
             {
               if (v != "all") parse_language(v);
               c.language = v;
             }),
      TS_KEY("stopwords_en", "English stop word list, one term per line", c.stopwords_en = v),
      TS_KEY("stopwords_zh", "Chinese stop word list, one term per line", c.stopwords_zh = v),
      TS_KEY("lexicon", "segmentation lexicon for Chinese text, one term per line", c.lexicon = v),
      TS_KEY("min_token_len", "minimum token length in characters (default 2 en, 1 zh)",
             c.min_token_len = parse_integer<std::size_t>(key, v)),
      TS_KEY("include_title", "analyze title + abstract instead of abstract only",
             c.include_title = parse_bool(key, v)),
      TS_KEY("keep_numeric", "keep purely numeric tokens", c.keep_numeric = parse_bool(key, v)),
      TS_KEY("min_df", "minimum document frequency of a vocabulary term", c.min_df = parse_integer<std::int64_t>(key, v)),
      TS_KEY("max_df_ratio", "maximum fraction of documents a term may occur in", c.max_df_ratio = parse_real(key, v)),
      TS_KEY("topics", "topic count K for analyze", c.topics = parse_integer<int>(key, v)),
      TS_KEY("alpha", "document-topic Dirichlet prior (default 50/K)", c.alpha = parse_real(key, v)),
      TS_KEY("beta", "topic-word Dirichlet prior", c.beta = parse_real(key, v)),
      TS_KEY("iterations", "Gibbs sweeps", c.iterations = parse_integer<int>(key, v)),
      TS_KEY("burn_in", "sweeps before sample averaging", c.burn_in = parse_integer<int>(key, v)),
      TS_KEY("average_after_burn_in", "average estimates over post-burn-in sweeps",
             c.average_after_burn_in = parse_bool(key, v)),
      TS_KEY("coherence_measure", "u_mass or c_npmi_window", c.coherence.measure = parse_coherence_measure(v)),
      TS_KEY("coherence_window", "sliding window width in tokens", c.coherence.window = parse_integer<int>(key, v)),
      TS_KEY("coherence_top_n", "top words per topic scored", c.coherence.top_n = parse_integer<int>(key, v)),
      TS_KEY("coherence_epsilon", "smoothing constant (default 1 for u_mass, 1e-12 for NPMI)",
             c.coherence.epsilon = parse_real(key, v)),
      TS_KEY("k_min", "smallest K in the sweep", c.k_min = parse_integer<int>(key, v)),
      TS_KEY("k_max", "largest K in the sweep", c.k_max = parse_integer<int>(key, v)),
      TS_KEY("seeds_per_k", "models trained per K in the sweep", c.seeds_per_k = parse_integer<int>(key, v)),
      TS_KEY("cooccur_threshold", "main-topic share threshold (strict)", c.cooccur_threshold = parse_real(key, v)),
      TS_KEY("trend_rule", "dominant or main_topics", c.trend_rule = parse_attribution_rule(v)),
      TS_KEY("top_words", "words listed per topic", c.top_words = parse_integer<int>(key, v)),
      TS_KEY("topic_labels", "topic labels separated by '|'", c.topic_labels = split_labels(v)),
      TS_KEY("out", "output directory", c.out = v),
      TS_KEY("corpus", "corpus bundle path (default <out>/corpus.json)", c.corpus = v),
      TS_KEY("model", "model file path (default <out>/model.json)", c.model = v),
      TS_KEY("seed", "global RNG seed", c.seed = parse_integer<std::uint64_t>(key, v)),
      TS_KEY("threads", "worker threads", c.threads = parse_integer<int>(key, v)),
  };
}

#undef TS_KEY

}  // namespace

LdaConfig PipelineConfig::lda_config(int num_topics) const {
  LdaConfig c;
  c.num_topics = num_topics;
  c.alpha = alpha;
  c.beta = beta;
  c.iterations = iterations;
  c.burn_in = burn_in;
  c.seed = seed;
  c.average_after_burn_in = average_after_burn_in;
  return c;
}

void PipelineConfig::validate() const {
  if (min_token_len && *min_token_len < 1) throw ValidationError("min_token_len must be >= 1");
  if (min_df < 1) throw ValidationError("min_df must be >= 1");
  if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0)) throw ValidationError("max_df_ratio must be in (0, 1]");
  if (topics && *topics < 1) throw ValidationError("topics must be >= 1");
  lda_config(topics.value_or(2)).validate();
  coherence.validate();
  if (k_min < 2 || k_min > k_max) throw ValidationError("sweep range needs 2 <= k_min <= k_max");
  if (seeds_per_k < 1) throw ValidationError("seeds_per_k must be >= 1");
  if (!(cooccur_threshold > 0.0 && cooccur_threshold < 1.0))
    throw ValidationError("cooccur_threshold must be in (0, 1)");
  if (top_words < 1) throw ValidationError("top_words must be >= 1");
  if (threads < 1) throw ValidationError("threads must be >= 1");
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = make_keys();
  return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> values;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line) + ": expected 'key = value'");
    values[trim(content.substr(0, eq))] = trim(content.substr(eq + 1));
  }
  return values;
}

void apply_config_values(PipelineConfig& config, const std::map<std::string, std::string>& values) {
  const auto& keys = config_keys();
  for (const auto& [name, value] : values) {
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.name == name; });
    if (it == keys.end()) throw ValidationError("unknown config key '" + name + "'");
    it->apply(config, value);
  }
}

PipelineConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  auto values = parse_config_text(buf.str());
  // Paths in a config file are relative to the file itself.
  const auto base = path.parent_path();
  for (const char* key : {"input", "stopwords_en", "stopwords_zh", "lexicon", "out", "corpus", "model"}) {
    const auto it = values.find(key);
    if (it != values.end() && !it->second.empty() && std::filesystem::path(it->second).is_relative())
      it->second = (base / it->second).lexically_normal().string();
  }
  PipelineConfig config;
  apply_config_values(config, values);
  return config;
}

}  // namespace topicscope
