#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "topicscope/config.hpp"
#include "topicscope/error.hpp"
#include "topicscope/pipeline.hpp"

namespace {

constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;
constexpr int kExitUsage = 64;

struct Subcommand {
  CLI::App* app = nullptr;
  std::string config_file;
  std::map<std::string, std::string> flags;
};

std::string dashed(std::string name) {
  for (auto& c : name) {
    if (c == '_') c = '-';
  }
  return name;
}

Subcommand add_subcommand(CLI::App& app, const std::string& name, const std::string& description) {
  Subcommand sub;
  sub.app = app.add_subcommand(name, description);
  sub.app->set_version_flag("--version", std::string("topicscope ") + TOPICSCOPE_VERSION);
  return sub;
}

void add_config_flags(Subcommand& sub) {
  sub.app->add_option("--config", sub.config_file, "key = value configuration file");
  for (const auto& key : topicscope::config_keys()) {
    auto* flags = &sub.flags;
    const std::string name = key.name;
    sub.app->add_option_function<std::string>(
        "--" + dashed(key.name), [flags, name](const std::string& v) { (*flags)[name] = v; }, key.help);
  }
}

topicscope::PipelineConfig resolve(const Subcommand& sub) {
  topicscope::PipelineConfig config;
  if (!sub.config_file.empty()) config = topicscope::load_config_file(sub.config_file);
  topicscope::apply_config_values(config, sub.flags);
  config.validate();
  return config;
}

void print_ingest(const topicscope::IngestReport& r, const topicscope::PipelineConfig& config) {
  std::cout << "records: " << r.records << "\n"
            << "documents: " << r.documents << " (dropped " << r.dropped_empty + r.dropped_oov << ", "
            << r.filtered_language << " filtered by language)\n"
            << "vocabulary: " << r.vocabulary << "\n"
            << "tokens: " << r.tokens << "\n"
            << "wrote " << config.corpus_path().string() << "\n";
}

void print_sweep(const topicscope::SweepResult& sweep) {
  for (const auto& e : sweep.entries) std::cout << "K=" << e.num_topics << " mean_coherence=" << e.mean_coherence << "\n";
  std::cout << "recommended K: " << sweep.best_num_topics << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic modeling pipeline for patent and literature corpora"};
  app.set_version_flag("--version", std::string("topicscope ") + TOPICSCOPE_VERSION);
  app.require_subcommand(1);

  auto ingest = add_subcommand(app, "ingest", "Tokenize records and build the corpus bundle");
  auto sweep = add_subcommand(app, "sweep", "Score a range of topic counts by coherence");
  auto analyze = add_subcommand(app, "analyze", "Train at a fixed topic count and write every report");
  auto exporter = add_subcommand(app, "export", "Rewrite the reports from an existing model");
  auto run_all = add_subcommand(app, "run-all", "ingest, sweep and analyze in one go");
  for (auto* sub : {&ingest, &sweep, &analyze, &exporter, &run_all}) add_config_flags(*sub);

  auto sample = add_subcommand(app, "generate-sample", "Write the synthetic sample records as JSONL");
  std::string sample_path = "records.jsonl";
  std::size_t sample_count = 50;
  std::uint64_t sample_seed = 7;
  sample.app->add_option("--output", sample_path, "destination JSONL file");
  sample.app->add_option("--count", sample_count, "number of records");
  sample.app->add_option("--seed", sample_seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (ingest.app->parsed()) {
      const auto config = resolve(ingest);
      print_ingest(topicscope::cmd_ingest(config), config);
    } else if (sweep.app->parsed()) {
      print_sweep(topicscope::cmd_sweep(resolve(sweep)));
    } else if (analyze.app->parsed()) {
      const auto config = resolve(analyze);
      const auto model = topicscope::cmd_analyze(config);
      std::cout << "trained K=" << model.num_topics() << "; reports in " << config.out.string() << "\n";
    } else if (exporter.app->parsed()) {
      const auto config = resolve(exporter);
      topicscope::cmd_export(config);
      std::cout << "reports in " << config.out.string() << "\n";
    } else if (run_all.app->parsed()) {
      const auto config = resolve(run_all);
      const int k = topicscope::cmd_run_all(config);
      std::cout << "analyzed K=" << k << "; reports in " << config.out.string() << "\n";
    } else if (sample.app->parsed()) {
      std::ofstream out(sample_path, std::ios::binary);
      if (!out) throw topicscope::IoError("cannot write '" + sample_path + "'");
      out << topicscope::records_to_jsonl(topicscope::make_sample_records(sample_count, sample_seed));
    }
  } catch (const topicscope::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == topicscope::ErrorKind::io ? kExitIo : kExitValidation;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
