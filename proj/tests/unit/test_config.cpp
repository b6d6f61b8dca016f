#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "topicscope/config.hpp"
#include "topicscope/error.hpp"

using namespace topicscope;

TEST_CASE("config text parsing") {
  const auto values = parse_config_text("# comment\n topics = 5 \nbeta=0.1 # trailing\n\nlanguage = zh\n");
  CHECK(values.at("topics") == "5");
  CHECK(values.at("beta") == "0.1");
  PipelineConfig c;
  apply_config_values(c, values);
  CHECK(c.topics == 5);
  CHECK(c.beta == 0.1);
  CHECK(c.language == "zh");
  CHECK_THROWS_AS(parse_config_text("novalue\n"), ValidationError);
  CHECK_THROWS_AS(apply_config_values(c, {{"no_such_key", "1"}}), ValidationError);
  CHECK_THROWS_AS(apply_config_values(c, {{"topics", "five"}}), ValidationError);
  CHECK_THROWS_AS(apply_config_values(c, {{"language", "fr"}}), ValidationError);
}

TEST_CASE("config defaults and validation") {
  PipelineConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.coherence.measure == CoherenceMeasure::c_npmi_window);
  CHECK(c.coherence.window == 110);
  CHECK(c.coherence.effective_epsilon() == 1e-12);
  CHECK(c.lda_config(4).effective_alpha() == 12.5);
  CHECK(c.corpus_path() == std::filesystem::path("out") / "corpus.json");
  c.burn_in = c.iterations;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = PipelineConfig{};
  c.k_min = 1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = PipelineConfig{};
  c.cooccur_threshold = 1.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("config file paths resolve against the file") {
  const auto dir = std::filesystem::temp_directory_path() / "topicscope_cfg_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "run.conf") << "input = records.jsonl\nstopwords_en = /abs/stop.txt\nk_max = 4\n";
  const auto c = load_config_file(dir / "run.conf");
  CHECK(c.input == dir / "records.jsonl");
  CHECK(c.stopwords_en == "/abs/stop.txt");
  CHECK(c.k_max == 4);
  CHECK_THROWS_AS(load_config_file(dir / "missing.conf"), IoError);
}

TEST_CASE("every key has a setter") {
  for (const auto& key : config_keys()) {
    CHECK(!key.help.empty());
    CHECK(key.apply);
  }
}
