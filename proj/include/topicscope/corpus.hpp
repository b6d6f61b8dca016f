#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace topicscope {

enum class Language { zh, en, other };

Language parse_language(const std::string& code);
std::string to_string(Language lang);

struct RawRecord {
  std::string id;
  int year = 0;
  Language language = Language::en;
  std::string title;
  std::string abstract_text;
};

enum class RecordFormat { jsonl, csv };

/// Reads records in input order. Malformed rows raise ValidationError naming
/// the line number and field; duplicate ids are rejected.
std::vector<RawRecord> load_records(const std::filesystem::path& path, RecordFormat format);
RecordFormat parse_record_format(const std::string& name);

// One JSON object per line with keys id, year, language, title, abstract.
std::string records_to_jsonl(const std::vector<RawRecord>& records);

// One term per line, UTF-8. Blank lines and surrounding whitespace ignored.
std::vector<std::string> load_term_list(const std::filesystem::path& path);

/// Longest-entry-first dictionary for forward maximum matching.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(const std::vector<std::string>& terms);

  bool contains(const std::string& term) const { return terms_.count(term) != 0; }
  bool empty() const { return terms_.empty(); }
  // Longest entry measured in code points.
  std::size_t max_length() const { return max_length_; }

 private:
  std::set<std::string> terms_;
  std::size_t max_length_ = 0;
};

// Number of UTF-8 code points; invalid bytes count as one each.
std::size_t utf8_length(const std::string& text);

struct TokenizeOptions {
  bool keep_numeric = false;
};

/// en/other: runs of ASCII alphanumerics and non-ASCII word characters,
/// ASCII lowercased; all other symbols separate.
/// zh: ASCII runs as for en, remaining text segmented by forward maximum
/// matching against `lexicon` (single code points when nothing matches).
std::vector<std::string> tokenize(const std::string& text, Language language,
                                  const Lexicon* lexicon = nullptr,
                                  const TokenizeOptions& options = {});

struct Document {
  std::string id;
  int year = 0;
  std::vector<std::string> tokens;
};

using StopwordSets = std::map<Language, std::set<std::string>>;

struct PreprocessOptions {
  // Minimum token length in code points; unset selects 2 (en/other) or 1 (zh).
  std::optional<std::size_t> min_token_len;
  bool include_title = false;
  bool keep_numeric = false;
  const Lexicon* lexicon = nullptr;
};

std::size_t default_min_token_len(Language language);

struct PreprocessResult {
  std::vector<Document> docs;
  std::vector<std::string> dropped_ids;
};

PreprocessResult preprocess(const std::vector<RawRecord>& records, const StopwordSets& stopwords,
                            const PreprocessOptions& options = {});

struct Vocabulary {
  std::vector<std::string> terms;  // index -> term, lexicographic
  std::vector<std::int64_t> doc_freq;
  std::vector<std::int64_t> coll_freq;
  std::unordered_map<std::string, std::int32_t> index;

  std::size_t size() const { return terms.size(); }
  std::optional<std::int32_t> find(const std::string& term) const;
};

Vocabulary build_vocabulary(const std::vector<Document>& docs, std::int64_t min_df = 2,
                            double max_df_ratio = 0.95);

// Builds the lookup index from `terms`; frequency vectors are left as given.
Vocabulary make_vocabulary(std::vector<std::string> terms, std::vector<std::int64_t> doc_freq,
                           std::vector<std::int64_t> coll_freq);

struct BowDocument {
  std::string id;
  int year = 0;
  std::vector<std::int32_t> tokens;                        // in-vocabulary term indices, text order
  std::vector<std::pair<std::int32_t, std::int32_t>> counts;  // (term, count), term ascending

  std::int64_t length() const { return static_cast<std::int64_t>(tokens.size()); }
};

struct BowCorpus {
  Vocabulary vocabulary;
  std::vector<BowDocument> docs;

  std::size_t num_docs() const { return docs.size(); }
  std::size_t vocab_size() const { return vocabulary.size(); }
  std::int64_t total_tokens() const;
};

// Derives the sparse counts of a document from its token sequence.
std::vector<std::pair<std::int32_t, std::int32_t>> count_terms(const std::vector<std::int32_t>& tokens);

struct BowResult {
  BowCorpus corpus;
  std::vector<std::string> dropped_ids;
};

BowResult to_bow(const std::vector<Document>& docs, const Vocabulary& vocab);

/// Corpus bundle JSON:
///   {"format":"topicscope-corpus","version":1,
///    "vocabulary":[{"term":..,"doc_freq":..,"coll_freq":..},...],
///    "documents":[{"id":..,"year":..,"tokens":[..],"counts":[[term,count],...]},...]}
std::string corpus_to_json(const BowCorpus& corpus);
BowCorpus corpus_from_json(const std::string& text);
void save_corpus(const BowCorpus& corpus, const std::filesystem::path& path);
BowCorpus load_corpus(const std::filesystem::path& path);

}  // namespace topicscope
