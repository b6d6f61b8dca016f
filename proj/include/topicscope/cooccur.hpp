#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "topicscope/lda.hpp"

namespace topicscope {

/// {k : theta_k > threshold}, ascending. The comparison is strict.
std::vector<int> main_topics(const Eigen::Ref<const Eigen::RowVectorXd>& theta_row, double threshold = 0.10);

struct TopicGraph {
  int num_topics = 0;
  std::vector<std::string> labels;         // "topic_k" unless supplied
  std::vector<std::int64_t> node_docs;     // documents with k among their main topics
  std::map<std::pair<int, int>, std::int64_t> edges;  // key (i, j), i < j; weight >= 1

  std::int64_t weight(int i, int j) const;
  bool operator==(const TopicGraph&) const = default;
};

std::string default_topic_label(int topic);

/// Every unordered pair of a document's main topics adds 1 to that edge.
TopicGraph build_cooccurrence_graph(const Eigen::Ref<const Eigen::MatrixXd>& theta, double threshold = 0.10);
inline TopicGraph build_cooccurrence_graph(const LdaModel& model, double threshold = 0.10) {
  return build_cooccurrence_graph(model.theta, threshold);
}

struct GraphMetrics {
  std::vector<std::int64_t> degree;
  std::vector<std::int64_t> weighted_degree;
  double density = 0.0;
  bool density_defined = true;  // false when K < 2
};

GraphMetrics graph_metrics(const TopicGraph& graph);

/// GEXF 1.2 with defaultedgetype="undirected". Nodes are written by index and
/// edges by (i, j); the "documents" node attribute carries node_docs.
std::string gexf_string(const TopicGraph& graph);
void export_gexf(const TopicGraph& graph, const std::filesystem::path& path);
TopicGraph parse_gexf(const std::string& xml);
TopicGraph load_gexf(const std::filesystem::path& path);

// "source,target,weight" rows in edge order.
std::string edge_list_csv(const TopicGraph& graph);

}  // namespace topicscope
