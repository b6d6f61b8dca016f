#include "topicscope/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "topicscope/error.hpp"

namespace topicscope {
namespace {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string lower_ascii(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_field(std::size_t line, const std::string& field, const std::string& why) {
  throw ValidationError("line " + std::to_string(line) + ": field '" + field + "' " + why);
}

int parse_year(const std::string& text, std::size_t line) {
  const std::string t = trim(text);
  int year = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), year);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    bad_field(line, "year", "is not an integer: '" + text + "'");
  return year;
}

RawRecord make_record(std::size_t line, std::string id, int year, const std::string& language,
                      std::string title, std::string abstract_text) {
  if (id.empty()) bad_field(line, "id", "is empty");
  if (year < 1900 || year > 2100) bad_field(line, "year", "out of range [1900, 2100]: " + std::to_string(year));
  RawRecord r;
  r.id = std::move(id);
  r.year = year;
  try {
    r.language = parse_language(language);
  } catch (const ValidationError&) {
    bad_field(line, "language", "must be zh, en or other: '" + language + "'");
  }
  r.title = std::move(title);
  r.abstract_text = std::move(abstract_text);
  return r;
}

std::string json_string_field(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) bad_field(line, key, "is missing");
  if (!it->is_string()) bad_field(line, key, "must be a string");
  return it->get<std::string>();
}

std::vector<RawRecord> parse_jsonl(const std::string& text) {
  std::vector<RawRecord> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (trim(raw).empty()) continue;
    json obj;
    try {
      obj = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw ValidationError("line " + std::to_string(line) + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object()) throw ValidationError("line " + std::to_string(line) + ": expected a JSON object");
    const auto year_it = obj.find("year");
    if (year_it == obj.end()) bad_field(line, "year", "is missing");
    int year = 0;
    if (year_it->is_number_integer()) {
      year = year_it->get<int>();
    } else if (year_it->is_string()) {
      year = parse_year(year_it->get<std::string>(), line);
    } else {
      bad_field(line, "year", "must be an integer");
    }
    out.push_back(make_record(line, json_string_field(obj, "id", line), year,
                              json_string_field(obj, "language", line), json_string_field(obj, "title", line),
                              json_string_field(obj, "abstract", line)));
  }
  return out;
}

// RFC 4180 rows; each row carries the line number it starts on.
std::vector<std::pair<std::size_t, std::vector<std::string>>> parse_csv_rows(const std::string& text) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.emplace_back(row_line, std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
      ++line;
      row_line = line;
    } else if (c == '\r') {
      // CRLF line endings
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw ValidationError("line " + std::to_string(row_line) + ": unterminated quoted field");
  if (!field.empty() || !row.empty()) end_row();
  return rows;
}

std::vector<RawRecord> parse_csv(const std::string& text) {
  auto rows = parse_csv_rows(text);
  std::vector<RawRecord> out;
  if (rows.empty()) return out;
  const auto& header = rows.front().second;
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[trim(header[i])] = i;
  for (const char* key : {"id", "year", "language", "title", "abstract"}) {
    if (!column.count(key)) bad_field(rows.front().first, key, "missing from CSV header");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, cells] = rows[r];
    if (cells.size() != header.size())
      throw ValidationError("line " + std::to_string(line) + ": expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(cells.size()));
    auto cell = [&](const char* key) { return cells[column.at(key)]; };
    out.push_back(make_record(line, cell("id"), parse_year(cell("year"), line), trim(cell("language")),
                              cell("title"), cell("abstract")));
  }
  return out;
}

}  // namespace

Language parse_language(const std::string& code) {
  const std::string c = lower_ascii(trim(code));
  if (c == "zh") return Language::zh;
  if (c == "en") return Language::en;
  if (c == "other") return Language::other;
  throw ValidationError("unknown language '" + code + "'");
}

std::string to_string(Language lang) {
  switch (lang) {
    case Language::zh:
      return "zh";
    case Language::en:
      return "en";
    case Language::other:
      break;
  }
  return "other";
}

RecordFormat parse_record_format(const std::string& name) {
  const std::string n = lower_ascii(name);
  if (n == "jsonl") return RecordFormat::jsonl;
  if (n == "csv") return RecordFormat::csv;
  throw ValidationError("unknown record format '" + name + "' (expected jsonl or csv)");
}

std::vector<RawRecord> load_records(const std::filesystem::path& path, RecordFormat format) {
  const std::string text = read_file(path);
  auto records = format == RecordFormat::jsonl ? parse_jsonl(text) : parse_csv(text);
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.id).second) throw ValidationError("duplicate record id '" + r.id + "'");
  }
  return records;
}

std::string records_to_jsonl(const std::vector<RawRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    json obj = {{"id", r.id},
                {"year", r.year},
                {"language", to_string(r.language)},
                {"title", r.title},
                {"abstract", r.abstract_text}};
    out += obj.dump() + "\n";
  }
  return out;
}

std::vector<std::string> load_term_list(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> terms;
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (!t.empty()) terms.push_back(std::move(t));
  }
  return terms;
}

std::size_t default_min_token_len(Language language) { return language == Language::zh ? 1 : 2; }

PreprocessResult preprocess(const std::vector<RawRecord>& records, const StopwordSets& stopwords,
                            const PreprocessOptions& options) {
  if (options.min_token_len && *options.min_token_len < 1)
    throw ValidationError("min_token_len must be >= 1");
  PreprocessResult result;
  const TokenizeOptions tok{options.keep_numeric};
  for (const auto& record : records) {
    const std::string text =
        options.include_title ? record.title + "\n" + record.abstract_text : record.abstract_text;
    const auto stop_it = stopwords.find(record.language);
    const std::size_t min_len = options.min_token_len.value_or(default_min_token_len(record.language));
    Document doc{record.id, record.year, {}};
    for (auto& token : tokenize(text, record.language, options.lexicon, tok)) {
      if (utf8_length(token) < min_len) continue;
      if (stop_it != stopwords.end() && stop_it->second.count(token)) continue;
      doc.tokens.push_back(std::move(token));
    }
    if (doc.tokens.empty()) {
      result.dropped_ids.push_back(record.id);
    } else {
      result.docs.push_back(std::move(doc));
    }
  }
  return result;
}

std::optional<std::int32_t> Vocabulary::find(const std::string& term) const {
  const auto it = index.find(term);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

Vocabulary make_vocabulary(std::vector<std::string> terms, std::vector<std::int64_t> doc_freq,
                           std::vector<std::int64_t> coll_freq) {
  Vocabulary v;
  v.terms = std::move(terms);
  v.doc_freq = std::move(doc_freq);
  v.coll_freq = std::move(coll_freq);
  if (v.doc_freq.size() != v.terms.size() || v.coll_freq.size() != v.terms.size())
    throw ValidationError("vocabulary frequency arrays do not match term count");
  for (std::size_t i = 0; i < v.terms.size(); ++i) {
    if (!v.index.emplace(v.terms[i], static_cast<std::int32_t>(i)).second)
      throw ValidationError("duplicate vocabulary term '" + v.terms[i] + "'");
  }
  return v;
}

Vocabulary build_vocabulary(const std::vector<Document>& docs, std::int64_t min_df, double max_df_ratio) {
  if (min_df < 1) throw ValidationError("min_df must be >= 1");
  if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0)) throw ValidationError("max_df_ratio must be in (0, 1]");
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> stats;  // term -> (df, cf)
  for (const auto& doc : docs) {
    std::set<std::string> seen;
    for (const auto& token : doc.tokens) {
      auto& s = stats[token];
      ++s.second;
      if (seen.insert(token).second) ++s.first;
    }
  }
  const auto num_docs = static_cast<double>(docs.size());
  std::vector<std::string> terms;
  std::vector<std::int64_t> df, cf;
  for (const auto& [term, s] : stats) {
    if (s.first < min_df || static_cast<double>(s.first) / num_docs > max_df_ratio) continue;
    terms.push_back(term);
    df.push_back(s.first);
    cf.push_back(s.second);
  }
  if (terms.empty())
    throw ValidationError("vocabulary is empty after filtering (min_df=" + std::to_string(min_df) +
                          ", max_df_ratio=" + std::to_string(max_df_ratio) + "); relax the thresholds");
  return make_vocabulary(std::move(terms), std::move(df), std::move(cf));
}

std::int64_t BowCorpus::total_tokens() const {
  std::int64_t n = 0;
  for (const auto& d : docs) n += d.length();
  return n;
}

std::vector<std::pair<std::int32_t, std::int32_t>> count_terms(const std::vector<std::int32_t>& tokens) {
  std::map<std::int32_t, std::int32_t> counts;
  for (const auto t : tokens) ++counts[t];
  return {counts.begin(), counts.end()};
}

BowResult to_bow(const std::vector<Document>& docs, const Vocabulary& vocab) {
  BowResult result;
  result.corpus.vocabulary = vocab;
  for (const auto& doc : docs) {
    BowDocument bow{doc.id, doc.year, {}, {}};
    for (const auto& token : doc.tokens) {
      if (const auto idx = vocab.find(token)) bow.tokens.push_back(*idx);
    }
    if (bow.tokens.empty()) {
      result.dropped_ids.push_back(doc.id);
      continue;
    }
    bow.counts = count_terms(bow.tokens);
    result.corpus.docs.push_back(std::move(bow));
  }
  return result;
}

std::string corpus_to_json(const BowCorpus& corpus) {
  json vocab = json::array();
  const auto& v = corpus.vocabulary;
  for (std::size_t i = 0; i < v.size(); ++i)
    vocab.push_back({{"term", v.terms[i]}, {"doc_freq", v.doc_freq[i]}, {"coll_freq", v.coll_freq[i]}});
  json docs = json::array();
  for (const auto& d : corpus.docs) {
    json counts = json::array();
    for (const auto& [term, count] : d.counts) counts.push_back({term, count});
    docs.push_back({{"id", d.id}, {"year", d.year}, {"tokens", d.tokens}, {"counts", counts}});
  }
  json root = {{"format", "topicscope-corpus"}, {"version", 1}, {"vocabulary", vocab}, {"documents", docs}};
  return root.dump(1) + "\n";
}

BowCorpus corpus_from_json(const std::string& text) {
  BowCorpus corpus;
  try {
    const json root = json::parse(text);
    if (root.value("format", "") != "topicscope-corpus") throw ValidationError("not a topicscope corpus bundle");
    std::vector<std::string> terms;
    std::vector<std::int64_t> df, cf;
    for (const auto& entry : root.at("vocabulary")) {
      terms.push_back(entry.at("term").get<std::string>());
      df.push_back(entry.at("doc_freq").get<std::int64_t>());
      cf.push_back(entry.at("coll_freq").get<std::int64_t>());
    }
    corpus.vocabulary = make_vocabulary(std::move(terms), std::move(df), std::move(cf));
    const auto vsize = static_cast<std::int32_t>(corpus.vocabulary.size());
    for (const auto& entry : root.at("documents")) {
      BowDocument d;
      d.id = entry.at("id").get<std::string>();
      d.year = entry.at("year").get<int>();
      d.tokens = entry.at("tokens").get<std::vector<std::int32_t>>();
      for (const auto t : d.tokens) {
        if (t < 0 || t >= vsize) throw ValidationError("document '" + d.id + "' has out-of-range term index");
      }
      d.counts = count_terms(d.tokens);
      if (entry.contains("counts") &&
          entry.at("counts").get<std::vector<std::pair<std::int32_t, std::int32_t>>>() != d.counts)
        throw ValidationError("document '" + d.id + "' counts disagree with its token sequence");
      corpus.docs.push_back(std::move(d));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed corpus bundle: ") + e.what());
  }
  return corpus;
}

void save_corpus(const BowCorpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << corpus_to_json(corpus);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

BowCorpus load_corpus(const std::filesystem::path& path) { return corpus_from_json(read_file(path)); }

}  // namespace topicscope
