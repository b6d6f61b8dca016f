#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "doctest.h"
#include "topicscope/trends.hpp"

using namespace topicscope;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool svg_parses(const std::string& svg) {
  boost::property_tree::ptree tree;
  std::istringstream in(svg);
  boost::property_tree::read_xml(in, tree);
  return tree.get_child_optional("svg").has_value();
}

}  // namespace

TEST_CASE("annual counts are zero-filled") {
  const std::vector<int> years = {2011, 2011, 2013};
  const auto t = annual_counts(years);
  CHECK(t.first_year == 2011);
  REQUIRE(t.num_years() == 3);
  CHECK(t.counts(0, 0) == 2);
  CHECK(t.counts(1, 0) == 0);
  CHECK(t.counts(2, 0) == 1);
  CHECK(annual_counts(std::vector<int>{}).empty());
  CHECK(trend_csv(t) == "year,all\n2011,2\n2012,0\n2013,1\n");
}

TEST_CASE("topic annual counts") {
  Eigen::MatrixXd theta(2, 2);
  theta << 0.8, 0.2, 0.6, 0.4;
  const std::vector<int> same_year = {2020, 2020};
  CHECK(topic_annual_counts(theta, same_year, AttributionRule::dominant).counts(0, 0) == 2);

  // Main-topic sets {1,2}, {1,2}, {2,3}.
  Eigen::MatrixXd three(3, 4);
  three << 0.02, 0.49, 0.47, 0.02, 0.05, 0.45, 0.45, 0.05, 0.03, 0.07, 0.50, 0.40;
  const std::vector<int> years = {2018, 2019, 2021};
  const auto main = topic_annual_counts(three, years, AttributionRule::main_topics);
  CHECK(main.counts.sum() == 6);
  CHECK(main.num_years() == 4);
  const auto dominant = topic_annual_counts(three, years, AttributionRule::dominant);
  CHECK(dominant.counts.sum() == 3);
  CHECK(dominant.counts.rowwise().sum() == annual_counts(years).counts.col(0));

  // Tie goes to the lower index.
  Eigen::MatrixXd tie(1, 2);
  tie << 0.5, 0.5;
  CHECK(topic_annual_counts(tie, std::vector<int>{2000}, AttributionRule::dominant).counts(0, 0) == 1);
}

TEST_CASE("relabelling topics permutes trend columns") {
  Eigen::MatrixXd theta(4, 3);
  theta << 0.7, 0.2, 0.1, 0.1, 0.8, 0.1, 0.2, 0.2, 0.6, 0.5, 0.4, 0.1;
  const std::vector<int> years = {2010, 2012, 2012, 2013};
  Eigen::MatrixXd swapped = theta;
  swapped.col(0) = theta.col(2);
  swapped.col(2) = theta.col(0);
  for (const auto rule : {AttributionRule::dominant, AttributionRule::main_topics}) {
    const auto a = topic_annual_counts(theta, years, rule);
    const auto b = topic_annual_counts(swapped, years, rule);
    CHECK(a.counts.col(0) == b.counts.col(2));
    CHECK(a.counts.col(1) == b.counts.col(1));
    CHECK(a.counts.col(2) == b.counts.col(0));
  }
}

TEST_CASE("trend outputs") {
  const auto dir = fs::temp_directory_path() / "topicscope_trend_test";
  fs::create_directories(dir);

  TrendTable one;
  one.first_year = 2020;
  one.columns = {"0"};
  one.counts.resize(1, 1);
  one.counts << 5;
  emit_trend_outputs(one, {"Rules"}, dir / "one");
  const auto csv = slurp(dir / "one.csv");
  CHECK(csv == "year,Rules\n2020,5\n");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(svg_parses(slurp(dir / "one.svg")));

  const auto empty = annual_counts(std::vector<int>{});
  emit_trend_outputs(empty, {}, dir / "empty");
  CHECK(slurp(dir / "empty.csv") == "year,all\n");
  const auto empty_svg = slurp(dir / "empty.svg");
  CHECK(svg_parses(empty_svg));
  CHECK(empty_svg.find(">no data</text>") != std::string::npos);

  const std::vector<int> years = {2011, 2015, 2015, 2019, 2020};
  const auto table = annual_counts(years);
  emit_trend_outputs(table, {}, dir / "a");
  emit_trend_outputs(table, {}, dir / "b");
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.svg") == slurp(dir / "b.svg"));
  CHECK(svg_parses(slurp(dir / "a.svg")));
  CHECK(trend_csv(one, {"a,b"}) == "year,\"a,b\"\n2020,5\n");
}
