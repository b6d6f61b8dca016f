#include "topicscope/trends.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "topicscope/cooccur.hpp"
#include "topicscope/error.hpp"

namespace topicscope {
namespace {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

TrendTable empty_table_for_years(std::span<const int> years, std::vector<std::string> columns) {
  TrendTable table;
  table.columns = std::move(columns);
  if (years.empty()) {
    table.counts = CountMatrix::Zero(0, static_cast<Eigen::Index>(table.columns.size()));
    return table;
  }
  const auto [lo, hi] = std::minmax_element(years.begin(), years.end());
  table.first_year = *lo;
  table.counts = CountMatrix::Zero(*hi - *lo + 1, static_cast<Eigen::Index>(table.columns.size()));
  return table;
}

std::string column_label(const std::string& column, const std::vector<std::string>& labels) {
  if (column == "all") return column;
  const auto k = static_cast<std::size_t>(std::stoul(column));
  return k < labels.size() && !labels[k].empty() ? labels[k] : default_topic_label(static_cast<int>(k));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_text(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '"') out += "&quot;";
    else out += c;
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

// Smallest "nice" tick step (1, 2, 5 x 10^n) giving at most 5 intervals.
std::int64_t tick_step(std::int64_t max_value) {
  std::int64_t base = 1;
  for (;;) {
    for (const std::int64_t m : {1, 2, 5}) {
      if (max_value <= 5 * m * base) return m * base;
    }
    base *= 10;
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

TrendTable annual_counts(std::span<const int> years) {
  auto table = empty_table_for_years(years, {"all"});
  for (const int y : years) ++table.counts(y - table.first_year, 0);
  return table;
}

TrendTable annual_counts(const std::vector<Document>& docs) {
  std::vector<int> years;
  for (const auto& d : docs) years.push_back(d.year);
  return annual_counts(years);
}

TrendTable annual_counts(const BowCorpus& corpus) {
  std::vector<int> years;
  for (const auto& d : corpus.docs) years.push_back(d.year);
  return annual_counts(years);
}

AttributionRule parse_attribution_rule(const std::string& name) {
  if (name == "dominant") return AttributionRule::dominant;
  if (name == "main_topics") return AttributionRule::main_topics;
  throw ValidationError("unknown attribution rule '" + name + "' (expected dominant or main_topics)");
}

TrendTable topic_annual_counts(const Eigen::Ref<const Eigen::MatrixXd>& theta, std::span<const int> years,
                               AttributionRule rule, double threshold) {
  if (static_cast<Eigen::Index>(years.size()) != theta.rows())
    throw ValidationError("theta has " + std::to_string(theta.rows()) + " rows but " + std::to_string(years.size()) +
                          " years were given");
  std::vector<std::string> columns;
  for (Eigen::Index k = 0; k < theta.cols(); ++k) columns.push_back(std::to_string(k));
  auto table = empty_table_for_years(years, std::move(columns));
  for (Eigen::Index d = 0; d < theta.rows(); ++d) {
    const Eigen::Index row = years[d] - table.first_year;
    if (rule == AttributionRule::dominant) {
      Eigen::Index best = 0;
      for (Eigen::Index k = 1; k < theta.cols(); ++k) {
        if (theta(d, k) > theta(d, best)) best = k;
      }
      ++table.counts(row, best);
    } else {
      for (const int k : main_topics(theta.row(d), threshold)) ++table.counts(row, k);
    }
  }
  return table;
}

TrendTable topic_annual_counts(const LdaModel& model, const BowCorpus& corpus, AttributionRule rule,
                               double threshold) {
  std::vector<int> years;
  for (const auto& d : corpus.docs) years.push_back(d.year);
  return topic_annual_counts(model.theta, years, rule, threshold);
}

std::string trend_csv(const TrendTable& table, const std::vector<std::string>& labels) {
  std::string out = "year";
  for (const auto& c : table.columns) out += "," + csv_field(column_label(c, labels));
  out += "\n";
  for (Eigen::Index r = 0; r < table.num_years(); ++r) {
    out += std::to_string(table.year(r));
    for (Eigen::Index c = 0; c < table.counts.cols(); ++c) out += "," + std::to_string(table.counts(r, c));
    out += "\n";
  }
  return out;
}

std::string trend_svg(const TrendTable& table, const std::vector<std::string>& labels, const std::string& title) {
  const double margin_left = 60, margin_top = 40, margin_bottom = 50, legend_width = 200;
  const double plot_height = 300;
  const auto years = table.num_years();
  const auto series = static_cast<Eigen::Index>(table.columns.size());
  const double group_width = std::max<double>(24.0, 12.0 * static_cast<double>(series) + 8.0);
  const double plot_width = std::max(200.0, group_width * static_cast<double>(years));
  const double width = margin_left + plot_width + legend_width;
  const double height = margin_top + plot_height + margin_bottom;

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(width) + "\" height=\"" +
         fmt(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) + "\" fill=\"white\"/>\n";
  if (!title.empty())
    svg += "  <text x=\"" + fmt(margin_left) + "\" y=\"24\" font-size=\"14\">" + xml_text(title) + "</text>\n";
  if (table.empty() || series == 0) {
    svg += "  <text x=\"" + fmt(width / 2) + "\" y=\"" + fmt(height / 2) +
           "\" text-anchor=\"middle\">no data</text>\n</svg>\n";
    return svg;
  }

  const std::int64_t max_value = std::max<std::int64_t>(1, table.counts.maxCoeff());
  const std::int64_t step = tick_step(max_value);
  const std::int64_t top = ((max_value + step - 1) / step) * step;
  const double base_y = margin_top + plot_height;
  auto y_of = [&](std::int64_t v) { return base_y - plot_height * static_cast<double>(v) / static_cast<double>(top); };

  svg += "  <g stroke=\"#333\">\n";
  svg += "    <line x1=\"" + fmt(margin_left) + "\" y1=\"" + fmt(base_y) + "\" x2=\"" + fmt(margin_left + plot_width) +
         "\" y2=\"" + fmt(base_y) + "\"/>\n";
  svg += "    <line x1=\"" + fmt(margin_left) + "\" y1=\"" + fmt(margin_top) + "\" x2=\"" + fmt(margin_left) +
         "\" y2=\"" + fmt(base_y) + "\"/>\n  </g>\n";
  for (std::int64_t v = 0; v <= top; v += step) {
    svg += "  <text x=\"" + fmt(margin_left - 6) + "\" y=\"" + fmt(y_of(v) + 4) + "\" text-anchor=\"end\">" +
           std::to_string(v) + "</text>\n";
  }
  const double bar_width = (group_width - 8.0) / static_cast<double>(series);
  for (Eigen::Index r = 0; r < years; ++r) {
    const double group_x = margin_left + group_width * static_cast<double>(r) + 4.0;
    for (Eigen::Index c = 0; c < series; ++c) {
      const auto v = table.counts(r, c);
      if (v == 0) continue;
      svg += "  <rect x=\"" + fmt(group_x + bar_width * static_cast<double>(c)) + "\" y=\"" + fmt(y_of(v)) +
             "\" width=\"" + fmt(bar_width) + "\" height=\"" + fmt(base_y - y_of(v)) + "\" fill=\"" +
             kPalette[c % std::size(kPalette)] + "\"/>\n";
    }
    svg += "  <text x=\"" + fmt(group_x + (group_width - 8.0) / 2) + "\" y=\"" + fmt(base_y + 16) +
           "\" text-anchor=\"middle\" font-size=\"10\">" + std::to_string(table.year(r)) + "</text>\n";
  }
  svg += "  <text x=\"" + fmt(margin_left + plot_width / 2) + "\" y=\"" + fmt(height - 10) +
         "\" text-anchor=\"middle\">year</text>\n";
  const double legend_x = margin_left + plot_width + 20;
  for (Eigen::Index c = 0; c < series; ++c) {
    const double y = margin_top + 18.0 * static_cast<double>(c);
    svg += "  <rect x=\"" + fmt(legend_x) + "\" y=\"" + fmt(y) + "\" width=\"12\" height=\"12\" fill=\"" +
           kPalette[c % std::size(kPalette)] + "\"/>\n";
    svg += "  <text x=\"" + fmt(legend_x + 18) + "\" y=\"" + fmt(y + 10) + "\">" +
           xml_text(column_label(table.columns[c], labels)) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_trend_outputs(const TrendTable& table, const std::vector<std::string>& labels,
                        const std::filesystem::path& path_prefix, const std::string& title) {
  auto csv_path = path_prefix;
  csv_path += ".csv";
  auto svg_path = path_prefix;
  svg_path += ".svg";
  write_file(csv_path, trend_csv(table, labels));
  write_file(svg_path, trend_svg(table, labels, title));
}

}  // namespace topicscope
