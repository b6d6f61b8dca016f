#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "topicscope/corpus.hpp"
#include "topicscope/error.hpp"

using namespace topicscope;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
  const auto path = fs::temp_directory_path() / ("topicscope_test_" + name);
  std::ofstream(path, std::ios::binary) << content;
  return path;
}

Document doc(std::vector<std::string> tokens) { return {"d", 2020, std::move(tokens)}; }

}  // namespace

TEST_CASE("load_records reads JSONL in order") {
  CHECK(load_records(write_temp("empty.jsonl", ""), RecordFormat::jsonl).empty());

  const auto path = write_temp("three.jsonl",
                               R"({"id":"a","year":2011,"language":"en","title":"T1","abstract":"one"})"
                               "\n"
                               R"({"id":"b","year":"2012","language":"zh","title":"T2","abstract":"two"})"
                               "\n\n"
                               R"({"id":"c","year":2013,"language":"other","title":"T3","abstract":""})"
                               "\n");
  const auto records = load_records(path, RecordFormat::jsonl);
  REQUIRE(records.size() == 3);
  CHECK(records[0].id == "a");
  CHECK(records[1].year == 2012);
  CHECK(records[1].language == Language::zh);
  CHECK(records[2].abstract_text.empty());
}

TEST_CASE("load_records validation errors name the line and field") {
  const auto bad_year = write_temp("bad_year.jsonl",
                                   R"({"id":"a","year":2011,"language":"en","title":"","abstract":"x"})"
                                   "\n"
                                   R"({"id":"b","year":"20xx","language":"en","title":"","abstract":"x"})"
                                   "\n");
  try {
    load_records(bad_year, RecordFormat::jsonl);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 2") != std::string::npos);
    CHECK(what.find("year") != std::string::npos);
  }

  const auto dup = write_temp("dup.jsonl",
                              R"({"id":"a","year":2011,"language":"en","title":"","abstract":"x"})"
                              "\n"
                              R"({"id":"a","year":2012,"language":"en","title":"","abstract":"y"})"
                              "\n");
  CHECK_THROWS_AS(load_records(dup, RecordFormat::jsonl), ValidationError);

  const auto missing_field = write_temp("missing.jsonl", R"({"id":"a","year":2011,"language":"en","title":""})");
  CHECK_THROWS_WITH_AS(load_records(missing_field, RecordFormat::jsonl), doctest::Contains("abstract"),
                       ValidationError);
  const auto out_of_range = write_temp("range.jsonl",
                                       R"({"id":"a","year":1850,"language":"en","title":"","abstract":"x"})");
  CHECK_THROWS_AS(load_records(out_of_range, RecordFormat::jsonl), ValidationError);
  CHECK_THROWS_AS(load_records("/nonexistent/records.jsonl", RecordFormat::jsonl), IoError);
}

TEST_CASE("load_records parses quoted CSV") {
  const auto path = write_temp("records.csv",
                               "id,year,language,title,abstract\r\n"
                               "p1,2015,en,\"Checker, rule\",\"Line one\nline \"\"two\"\"\"\r\n"
                               "p2,2016,zh,标题,设计审查模块\r\n");
  const auto records = load_records(path, RecordFormat::csv);
  REQUIRE(records.size() == 2);
  CHECK(records[0].title == "Checker, rule");
  CHECK(records[0].abstract_text == "Line one\nline \"two\"");
  CHECK(records[1].language == Language::zh);

  const auto bad = write_temp("bad.csv", "id,year,language,title,abstract\np1,20xx,en,t,a\n");
  CHECK_THROWS_WITH_AS(load_records(bad, RecordFormat::csv), doctest::Contains("line 2"), ValidationError);
}

TEST_CASE("tokenize English") {
  CHECK(tokenize("Rule-Checking, BIM!", Language::en) == std::vector<std::string>{"rule", "checking", "bim"});
  CHECK(tokenize("", Language::en).empty());
  CHECK(tokenize("!%$#&*?/,;\"", Language::en).empty());
  CHECK(tokenize("IFC4 in 2019", Language::en) == std::vector<std::string>{"ifc4", "in"});
  CHECK(tokenize("IFC4 in 2019", Language::en, nullptr, {true}) == std::vector<std::string>{"ifc4", "in", "2019"});
  CHECK(tokenize("Café code", Language::en) == std::vector<std::string>{"café", "code"});
}

TEST_CASE("tokenize Chinese by forward maximum matching") {
  const Lexicon lexicon({"设计审查", "模块"});
  CHECK(tokenize("设计审查模块", Language::zh, &lexicon) == std::vector<std::string>{"设计审查", "模块"});
  // No lexicon: one token per character.
  CHECK(tokenize("设计审查", Language::zh) == std::vector<std::string>{"设", "计", "审", "查"});
  // Longest match wins over a shorter prefix entry.
  const Lexicon nested({"设计", "设计审查"});
  CHECK(tokenize("设计审查员", Language::zh, &nested) == std::vector<std::string>{"设计审查", "员"});
  // Punctuation separates; ASCII runs are lowercased words.
  CHECK(tokenize("基于BIM的，模块。", Language::zh, &lexicon) ==
        std::vector<std::string>{"基", "于", "bim", "的", "模块"});
}

TEST_CASE("preprocess removes stop words and short tokens") {
  StopwordSets stop{{Language::en, {"the"}}};
  std::vector<RawRecord> records = {{"r1", 2020, Language::en, "", "the the the"},
                                    {"r2", 2020, Language::en, "", "BIM model checking"}};
  const auto result = preprocess(records, stop);
  REQUIRE(result.docs.size() == 1);
  CHECK(result.dropped_ids == std::vector<std::string>{"r1"});
  CHECK(result.docs[0].tokens == std::vector<std::string>{"bim", "model", "checking"});

  PreprocessOptions long_only;
  long_only.min_token_len = 6;
  CHECK(preprocess(records, {}, long_only).docs[0].tokens == std::vector<std::string>{"checking"});

  PreprocessOptions with_title;
  with_title.include_title = true;
  const std::vector<RawRecord> titled = {{"t", 2020, Language::en, "Rule engine", "model"}};
  CHECK(preprocess(titled, {}, with_title).docs[0].tokens == std::vector<std::string>{"rule", "engine", "model"});
  CHECK(preprocess(titled, {}).docs[0].tokens == std::vector<std::string>{"model"});
}

TEST_CASE("preprocess output properties on random text") {
  std::mt19937 gen(11);
  const std::string alphabet = "abcdeTHE -,;!?%$#&*/\"0123456789";
  const std::set<std::string> stopwords = {"the", "a", "be"};
  StopwordSets stop{{Language::en, stopwords}};
  std::vector<RawRecord> records;
  for (int i = 0; i < 200; ++i) {
    std::string text;
    const int len = std::uniform_int_distribution<int>(0, 80)(gen);
    for (int c = 0; c < len; ++c) text += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(gen)];
    records.push_back({"r" + std::to_string(i), 2000, Language::en, "", text});
  }
  const auto first = preprocess(records, stop);
  CHECK(first.docs.size() + first.dropped_ids.size() == records.size());
  std::vector<RawRecord> rendered;
  for (const auto& d : first.docs) {
    std::string text;
    for (const auto& t : d.tokens) {
      CHECK(!t.empty());
      CHECK(t.size() >= 2);
      CHECK(stopwords.count(t) == 0);
      CHECK(t.find_first_of("!%$#&*?/,;\" -") == std::string::npos);
      text += t + " ";
    }
    rendered.push_back({d.id, d.year, Language::en, "", text});
  }
  const auto second = preprocess(rendered, stop);
  REQUIRE(second.docs.size() == first.docs.size());
  for (std::size_t i = 0; i < first.docs.size(); ++i) CHECK(second.docs[i].tokens == first.docs[i].tokens);
}

TEST_CASE("build_vocabulary thresholds") {
  const std::vector<Document> docs = {doc({"a", "b"}), doc({"a"})};
  const auto v = build_vocabulary(docs, 1, 1.0);
  CHECK(v.size() == 2);
  CHECK(v.terms == std::vector<std::string>{"a", "b"});
  CHECK(v.doc_freq == std::vector<std::int64_t>{2, 1});
  CHECK(build_vocabulary(docs, 2, 1.0).terms == std::vector<std::string>{"a"});
  CHECK_THROWS_AS(build_vocabulary(docs, 3, 1.0), ValidationError);
  CHECK(build_vocabulary(docs, 1, 0.6).terms == std::vector<std::string>{"b"});
  CHECK_THROWS_AS(build_vocabulary(docs, 0, 1.0), ValidationError);
  CHECK_THROWS_AS(build_vocabulary(docs, 1, 0.0), ValidationError);
}

TEST_CASE("to_bow counts and drops out-of-vocabulary documents") {
  const auto vocab = make_vocabulary({"a", "b"}, {1, 1}, {2, 1});
  auto result = to_bow({doc({"a", "a", "b"})}, vocab);
  REQUIRE(result.corpus.num_docs() == 1);
  CHECK(result.corpus.docs[0].counts == std::vector<std::pair<std::int32_t, std::int32_t>>{{0, 2}, {1, 1}});

  const auto only_a = make_vocabulary({"a"}, {1}, {1});
  result = to_bow({Document{"z", 2020, {"z"}}}, only_a);
  CHECK(result.corpus.num_docs() == 0);
  CHECK(result.dropped_ids == std::vector<std::string>{"z"});
  CHECK(to_bow({}, only_a).corpus.num_docs() == 0);
}

TEST_CASE("to_bow conserves in-vocabulary tokens and serializes deterministically") {
  std::mt19937 gen(5);
  std::vector<Document> docs;
  for (int d = 0; d < 60; ++d) {
    Document x{"d" + std::to_string(d), 2000 + d % 7, {}};
    const int len = std::uniform_int_distribution<int>(1, 30)(gen);
    for (int n = 0; n < len; ++n) x.tokens.push_back("t" + std::to_string(std::uniform_int_distribution<int>(0, 40)(gen)));
    docs.push_back(std::move(x));
  }
  const auto vocab = build_vocabulary(docs, 3, 0.9);
  const auto bow = to_bow(docs, vocab);
  std::int64_t in_vocab = 0;
  for (const auto& d : docs)
    for (const auto& t : d.tokens) in_vocab += vocab.find(t).has_value();
  std::int64_t counted = 0;
  for (const auto& d : bow.corpus.docs)
    for (const auto& [term, c] : d.counts) counted += c;
  CHECK(counted == in_vocab);
  CHECK(bow.corpus.total_tokens() == in_vocab);
  for (std::size_t t = 0; t < vocab.size(); ++t) {
    CHECK(vocab.doc_freq[t] >= 1);
    CHECK(vocab.doc_freq[t] <= static_cast<std::int64_t>(docs.size()));
  }

  const auto json = corpus_to_json(bow.corpus);
  CHECK(json == corpus_to_json(to_bow(docs, build_vocabulary(docs, 3, 0.9)).corpus));
  CHECK(corpus_to_json(corpus_from_json(json)) == json);
  CHECK_THROWS_AS(corpus_from_json("{\"format\":\"nope\"}"), ValidationError);
}
