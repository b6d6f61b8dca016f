#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "topicscope/corpus.hpp"
#include "topicscope/lda.hpp"

namespace topicscope {

/// Year-by-column counts. Rows cover [first_year, first_year + rows) without
/// gaps; columns are "all" or topic indices rendered as strings.
struct TrendTable {
  int first_year = 0;
  std::vector<std::string> columns;
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;

  Eigen::Index num_years() const { return counts.rows(); }
  int year(Eigen::Index row) const { return first_year + static_cast<int>(row); }
  bool empty() const { return counts.rows() == 0; }
};

TrendTable annual_counts(std::span<const int> years);
TrendTable annual_counts(const std::vector<Document>& docs);
TrendTable annual_counts(const BowCorpus& corpus);

enum class AttributionRule { dominant, main_topics };

AttributionRule parse_attribution_rule(const std::string& name);

/// dominant: each document once under argmax theta (ties to the lower index).
/// main_topics: each document once per topic with theta above `threshold`.
TrendTable topic_annual_counts(const Eigen::Ref<const Eigen::MatrixXd>& theta, std::span<const int> years,
                               AttributionRule rule, double threshold = 0.10);
TrendTable topic_annual_counts(const LdaModel& model, const BowCorpus& corpus, AttributionRule rule,
                               double threshold = 0.10);

// Column headers: `labels[k]` for topic k when given, else "topic_k"; "all" stays "all".
std::string trend_csv(const TrendTable& table, const std::vector<std::string>& labels = {});
std::string trend_svg(const TrendTable& table, const std::vector<std::string>& labels = {},
                      const std::string& title = "");

/// Writes <prefix>.csv and <prefix>.svg.
void emit_trend_outputs(const TrendTable& table, const std::vector<std::string>& labels,
                        const std::filesystem::path& path_prefix, const std::string& title = "");

}  // namespace topicscope
