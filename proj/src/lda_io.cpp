#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "topicscope/error.hpp"
#include "topicscope/lda.hpp"

namespace topicscope {
namespace {

using json = nlohmann::json;

constexpr char kBinaryMagic[8] = {'T', 'S', 'L', 'D', 'A', 'B', 'I', 'N'};
constexpr std::uint32_t kBinaryVersion = 1;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename Matrix>
Matrix matrix_from_json(const json& rows, Eigen::Index expect_rows, Eigen::Index expect_cols, const char* name) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != expect_rows)
    throw ValidationError(std::string("model field '") + name + "' has the wrong number of rows");
  Matrix m(expect_rows, expect_cols);
  for (Eigen::Index r = 0; r < expect_rows; ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != expect_cols)
      throw ValidationError(std::string("model field '") + name + "' has a row of the wrong length");
    for (Eigen::Index c = 0; c < expect_cols; ++c) m(r, c) = row[c].get<typename Matrix::Scalar>();
  }
  return m;
}

template <typename Matrix>
json counts_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json config_to_json(const LdaConfig& c) {
  return {{"num_topics", c.num_topics}, {"alpha", c.effective_alpha()}, {"beta", c.beta},
          {"iterations", c.iterations}, {"burn_in", c.burn_in},          {"seed", c.seed},
          {"average_after_burn_in", c.average_after_burn_in}};
}

LdaConfig config_from_json(const json& j) {
  LdaConfig c;
  c.num_topics = j.at("num_topics").get<int>();
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.iterations = j.at("iterations").get<int>();
  c.burn_in = j.at("burn_in").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.average_after_burn_in = j.value("average_after_burn_in", false);
  c.validate();
  return c;
}

// Rebuilds the count tables from z and checks them against any stored copy.
void rebuild_counts(LdaModel& model, Eigen::Index vocab_size) {
  const int num_topics = model.num_topics();
  const auto num_docs = static_cast<Eigen::Index>(model.assignments.size());
  model.doc_topic = DocTopicCounts::Zero(num_docs, num_topics);
  model.topic_word = TopicWordCounts::Zero(num_topics, vocab_size);
  model.topic_totals = TopicTotals::Zero(num_topics);
  for (Eigen::Index d = 0; d < num_docs; ++d) {
    for (const auto k : model.assignments[d]) {
      if (k < 0 || k >= num_topics) throw ValidationError("topic assignment out of range");
      ++model.doc_topic(d, k);
      ++model.topic_totals[k];
    }
  }
}

class Writer {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    bytes.insert(bytes.end(), raw, raw + sizeof(T));
  }
  std::vector<char> bytes;
};

class Reader {
 public:
  explicit Reader(const std::vector<char>& bytes) : bytes_(bytes) {}
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw ValidationError("truncated binary model");
    char raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<char>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string model_to_json(const LdaModel& model) {
  json root = {{"format", "topicscope-lda"},
               {"version", 1},
               {"config", config_to_json(model.config)},
               {"num_docs", model.num_docs()},
               {"vocab_size", model.vocab_size()},
               {"assignments", model.assignments},
               {"doc_topic", counts_to_json(model.doc_topic)},
               {"topic_word", counts_to_json(model.topic_word)},
               {"topic_totals", std::vector<std::int64_t>(model.topic_totals.data(),
                                                          model.topic_totals.data() + model.topic_totals.size())},
               {"theta", matrix_to_json(model.theta)},
               {"phi", matrix_to_json(model.phi)}};
  return root.dump(1) + "\n";
}

LdaModel model_from_json(const std::string& text) {
  LdaModel model;
  try {
    const json root = json::parse(text);
    if (root.value("format", "") != "topicscope-lda") throw ValidationError("not a topicscope LDA model");
    model.config = config_from_json(root.at("config"));
    const auto num_docs = root.at("num_docs").get<Eigen::Index>();
    const auto vocab_size = root.at("vocab_size").get<Eigen::Index>();
    const int k = model.num_topics();
    model.assignments = root.at("assignments").get<std::vector<std::vector<std::int32_t>>>();
    if (static_cast<Eigen::Index>(model.assignments.size()) != num_docs)
      throw ValidationError("assignment list does not match num_docs");
    rebuild_counts(model, vocab_size);
    model.topic_word = matrix_from_json<TopicWordCounts>(root.at("topic_word"), k, vocab_size, "topic_word");
    if (matrix_from_json<DocTopicCounts>(root.at("doc_topic"), num_docs, k, "doc_topic") != model.doc_topic)
      throw ValidationError("doc_topic counts disagree with assignments");
    for (int t = 0; t < k; ++t) {
      if (model.topic_word.row(t).cast<std::int64_t>().sum() != model.topic_totals[t])
        throw ValidationError("topic_word counts disagree with assignments");
    }
    model.theta = matrix_from_json<Eigen::MatrixXd>(root.at("theta"), num_docs, k, "theta");
    model.phi = matrix_from_json<Eigen::MatrixXd>(root.at("phi"), k, vocab_size, "phi");
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
  return model;
}

void save_model(const LdaModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << model_to_json(model);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

LdaModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

// Layout: magic, u32 version, config (i32 K, f64 alpha, f64 beta, i32 iterations,
// i32 burn_in, u64 seed, u8 averaged), i64 D, i64 V, then per document
// i64 length + i32 topics, then K*V i32 topic_word row-major, D*K f64 theta
// row-major, K*V f64 phi row-major.
std::vector<char> model_to_binary(const LdaModel& model) {
  Writer w;
  w.bytes.assign(kBinaryMagic, kBinaryMagic + sizeof kBinaryMagic);
  w.put(kBinaryVersion);
  const auto& c = model.config;
  w.put<std::int32_t>(c.num_topics);
  w.put(c.effective_alpha());
  w.put(c.beta);
  w.put<std::int32_t>(c.iterations);
  w.put<std::int32_t>(c.burn_in);
  w.put<std::uint64_t>(c.seed);
  w.put<std::uint8_t>(c.average_after_burn_in ? 1 : 0);
  w.put<std::int64_t>(model.num_docs());
  w.put<std::int64_t>(model.vocab_size());
  for (const auto& z : model.assignments) {
    w.put<std::int64_t>(static_cast<std::int64_t>(z.size()));
    for (const auto k : z) w.put<std::int32_t>(k);
  }
  for (Eigen::Index k = 0; k < model.topic_word.rows(); ++k)
    for (Eigen::Index v = 0; v < model.topic_word.cols(); ++v) w.put<std::int32_t>(model.topic_word(k, v));
  for (Eigen::Index d = 0; d < model.theta.rows(); ++d)
    for (Eigen::Index k = 0; k < model.theta.cols(); ++k) w.put(model.theta(d, k));
  for (Eigen::Index k = 0; k < model.phi.rows(); ++k)
    for (Eigen::Index v = 0; v < model.phi.cols(); ++v) w.put(model.phi(k, v));
  return std::move(w.bytes);
}

LdaModel model_from_binary(const std::vector<char>& bytes) {
  if (bytes.size() < sizeof kBinaryMagic || std::memcmp(bytes.data(), kBinaryMagic, sizeof kBinaryMagic) != 0)
    throw ValidationError("not a topicscope binary model");
  std::vector<char> body(bytes.begin() + sizeof kBinaryMagic, bytes.end());
  Reader r(body);
  if (r.get<std::uint32_t>() != kBinaryVersion) throw ValidationError("unsupported binary model version");
  LdaModel model;
  auto& c = model.config;
  c.num_topics = r.get<std::int32_t>();
  c.alpha = r.get<double>();
  c.beta = r.get<double>();
  c.iterations = r.get<std::int32_t>();
  c.burn_in = r.get<std::int32_t>();
  c.seed = r.get<std::uint64_t>();
  c.average_after_burn_in = r.get<std::uint8_t>() != 0;
  c.validate();
  const auto num_docs = r.get<std::int64_t>();
  const auto vocab_size = r.get<std::int64_t>();
  if (num_docs < 0 || vocab_size < 0) throw ValidationError("negative dimensions in binary model");
  model.assignments.resize(static_cast<std::size_t>(num_docs));
  for (auto& z : model.assignments) {
    const auto length = r.get<std::int64_t>();
    if (length < 0) throw ValidationError("negative document length in binary model");
    z.resize(static_cast<std::size_t>(length));
    for (auto& k : z) k = r.get<std::int32_t>();
  }
  rebuild_counts(model, vocab_size);
  for (Eigen::Index k = 0; k < c.num_topics; ++k)
    for (Eigen::Index v = 0; v < vocab_size; ++v) model.topic_word(k, v) = r.get<std::int32_t>();
  for (int k = 0; k < c.num_topics; ++k) {
    if (model.topic_word.row(k).cast<std::int64_t>().sum() != model.topic_totals[k])
      throw ValidationError("topic_word counts disagree with assignments");
  }
  model.theta.resize(num_docs, c.num_topics);
  for (Eigen::Index d = 0; d < num_docs; ++d)
    for (Eigen::Index k = 0; k < c.num_topics; ++k) model.theta(d, k) = r.get<double>();
  model.phi.resize(c.num_topics, vocab_size);
  for (Eigen::Index k = 0; k < c.num_topics; ++k)
    for (Eigen::Index v = 0; v < vocab_size; ++v) model.phi(k, v) = r.get<double>();
  if (!r.done()) throw ValidationError("trailing bytes in binary model");
  return model;
}

}  // namespace topicscope
