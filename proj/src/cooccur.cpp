#include "topicscope/cooccur.hpp"

#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "topicscope/error.hpp"

namespace topicscope {
namespace {

void check_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ValidationError("main-topic threshold must be in (0, 1)");
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  std::istringstream in(text);
  T value{};
  if (!(in >> value) || !in.eof()) throw ValidationError(std::string("GEXF: bad ") + what + " '" + text + "'");
  return value;
}

}  // namespace

std::string default_topic_label(int topic) { return "topic_" + std::to_string(topic); }

std::vector<int> main_topics(const Eigen::Ref<const Eigen::RowVectorXd>& theta_row, double threshold) {
  check_threshold(threshold);
  std::vector<int> out;
  for (Eigen::Index k = 0; k < theta_row.size(); ++k) {
    if (theta_row[k] > threshold) out.push_back(static_cast<int>(k));
  }
  return out;
}

std::int64_t TopicGraph::weight(int i, int j) const {
  if (i > j) std::swap(i, j);
  const auto it = edges.find({i, j});
  return it == edges.end() ? 0 : it->second;
}

TopicGraph build_cooccurrence_graph(const Eigen::Ref<const Eigen::MatrixXd>& theta, double threshold) {
  check_threshold(threshold);
  TopicGraph graph;
  graph.num_topics = static_cast<int>(theta.cols());
  for (int k = 0; k < graph.num_topics; ++k) graph.labels.push_back(default_topic_label(k));
  graph.node_docs.assign(static_cast<std::size_t>(graph.num_topics), 0);
  for (Eigen::Index d = 0; d < theta.rows(); ++d) {
    const auto topics = main_topics(theta.row(d), threshold);
    for (std::size_t a = 0; a < topics.size(); ++a) {
      ++graph.node_docs[topics[a]];
      for (std::size_t b = a + 1; b < topics.size(); ++b) ++graph.edges[{topics[a], topics[b]}];
    }
  }
  return graph;
}

GraphMetrics graph_metrics(const TopicGraph& graph) {
  GraphMetrics m;
  const auto k = static_cast<std::size_t>(graph.num_topics);
  m.degree.assign(k, 0);
  m.weighted_degree.assign(k, 0);
  for (const auto& [pair, w] : graph.edges) {
    ++m.degree[pair.first];
    ++m.degree[pair.second];
    m.weighted_degree[pair.first] += w;
    m.weighted_degree[pair.second] += w;
  }
  if (graph.num_topics < 2) {
    m.density_defined = false;
    m.density = 0.0;
  } else {
    m.density = 2.0 * static_cast<double>(graph.edges.size()) /
                (static_cast<double>(graph.num_topics) * static_cast<double>(graph.num_topics - 1));
  }
  return m;
}

std::string gexf_string(const TopicGraph& graph) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n"
      << "  <meta>\n    <creator>topicscope</creator>\n"
      << "    <description>topic co-occurrence network</description>\n  </meta>\n"
      << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n"
      << "    <attributes class=\"node\">\n"
      << "      <attribute id=\"documents\" title=\"documents\" type=\"integer\"/>\n"
      << "    </attributes>\n"
      << "    <nodes>\n";
  for (int k = 0; k < graph.num_topics; ++k) {
    const std::string label =
        static_cast<std::size_t>(k) < graph.labels.size() ? graph.labels[k] : default_topic_label(k);
    const std::int64_t docs = static_cast<std::size_t>(k) < graph.node_docs.size() ? graph.node_docs[k] : 0;
    out << "      <node id=\"" << k << "\" label=\"" << xml_escape(label) << "\">\n"
        << "        <attvalues><attvalue for=\"documents\" value=\"" << docs << "\"/></attvalues>\n"
        << "      </node>\n";
  }
  out << "    </nodes>\n    <edges>\n";
  std::size_t id = 0;
  for (const auto& [pair, w] : graph.edges) {
    out << "      <edge id=\"" << id++ << "\" source=\"" << pair.first << "\" target=\"" << pair.second
        << "\" type=\"undirected\" weight=\"" << w << "\"/>\n";
  }
  out << "    </edges>\n  </graph>\n</gexf>\n";
  return out.str();
}

void export_gexf(const TopicGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << gexf_string(graph);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

TopicGraph parse_gexf(const std::string& xml) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    std::istringstream in(xml);
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw ValidationError(std::string("GEXF is not well-formed XML: ") + e.what());
  }
  const auto graph_node = tree.get_child_optional("gexf.graph");
  if (!graph_node) throw ValidationError("GEXF: missing <gexf><graph>");
  if (graph_node->get<std::string>("<xmlattr>.defaultedgetype", "") != "undirected")
    throw ValidationError("GEXF: graph is not declared undirected");

  TopicGraph graph;
  std::map<int, std::pair<std::string, std::int64_t>> nodes;
  if (const auto list = graph_node->get_child_optional("nodes")) {
    for (const auto& [name, node] : *list) {
      if (name != "node") continue;
      const int id = parse_number<int>(node.get<std::string>("<xmlattr>.id"), "node id");
      std::int64_t docs = 0;
      if (const auto values = node.get_child_optional("attvalues")) {
        for (const auto& [vname, v] : *values) {
          if (vname == "attvalue" && v.get<std::string>("<xmlattr>.for", "") == "documents")
            docs = parse_number<std::int64_t>(v.get<std::string>("<xmlattr>.value"), "documents value");
        }
      }
      if (!nodes.emplace(id, std::make_pair(node.get<std::string>("<xmlattr>.label", default_topic_label(id)), docs))
               .second)
        throw ValidationError("GEXF: duplicate node id " + std::to_string(id));
    }
  }
  graph.num_topics = static_cast<int>(nodes.size());
  int expected = 0;
  for (const auto& [id, node] : nodes) {
    if (id != expected++) throw ValidationError("GEXF: node ids must be 0..K-1");
    graph.labels.push_back(node.first);
    graph.node_docs.push_back(node.second);
  }
  if (const auto list = graph_node->get_child_optional("edges")) {
    for (const auto& [name, edge] : *list) {
      if (name != "edge") continue;
      int s = parse_number<int>(edge.get<std::string>("<xmlattr>.source"), "edge source");
      int t = parse_number<int>(edge.get<std::string>("<xmlattr>.target"), "edge target");
      const auto w = parse_number<std::int64_t>(edge.get<std::string>("<xmlattr>.weight", "1"), "edge weight");
      if (s == t) throw ValidationError("GEXF: self-loop on node " + std::to_string(s));
      if (s < 0 || t < 0 || s >= graph.num_topics || t >= graph.num_topics)
        throw ValidationError("GEXF: edge references an unknown node");
      if (s > t) std::swap(s, t);
      if (w < 1) throw ValidationError("GEXF: edge weight must be a positive integer");
      if (!graph.edges.emplace(std::make_pair(s, t), w).second)
        throw ValidationError("GEXF: duplicate edge " + std::to_string(s) + "-" + std::to_string(t));
    }
  }
  return graph;
}

TopicGraph load_gexf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_gexf(buf.str());
}

std::string edge_list_csv(const TopicGraph& graph) {
  std::string out = "source,target,weight\n";
  for (const auto& [pair, w] : graph.edges)
    out += std::to_string(pair.first) + "," + std::to_string(pair.second) + "," + std::to_string(w) + "\n";
  return out;
}

}  // namespace topicscope
