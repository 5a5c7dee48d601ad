#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "tempattr/clustering.hpp"
#include "tempattr/masking.hpp"
#include "tempattr/svg.hpp"

using oracles::code_of;
using oracles::count_elements;
using oracles::xml_well_formed;
using tempattr::AttributionGrid;
using tempattr::CurvePlotOptions;
using tempattr::Dendrogram;
using tempattr::ErrorCode;
using tempattr::Merge;
using tempattr::MetricKind;
using tempattr::RowMajorMatrixXd;

namespace {

AttributionGrid demo_grid(Eigen::Index n_rows, Eigen::Index n_cols,
                          std::vector<std::uint8_t> present = {}) {
  std::vector<std::string> ids;
  std::vector<Eigen::Index> starts;
  RowMajorMatrixXd values(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    ids.push_back("row_" + std::to_string(i));
    for (Eigen::Index k = 0; k < n_cols; ++k) {
      values(i, k) = 0.01 * static_cast<double>(i * n_cols + k);
    }
  }
  for (Eigen::Index k = 0; k < n_cols; ++k) starts.push_back(10 * k);
  if (present.empty()) {
    present.assign(static_cast<std::size_t>(n_rows * n_cols), 1);
  }
  return AttributionGrid(MetricKind::M2DeltaPredTruePearson, std::move(ids),
                         std::move(starts), 5, std::move(values),
                         std::move(present));
}

Dendrogram demo_dendrogram(Eigen::Index n_leaves) {
  Dendrogram d;
  d.n_leaves = n_leaves;
  for (Eigen::Index i = 0; i < n_leaves; ++i) {
    d.leaf_labels.push_back("leaf_" + std::to_string(i));
  }
  // left-deep chain with growing heights
  int prev = 0;
  for (Eigen::Index s = 1; s < n_leaves; ++s) {
    Merge m;
    m.node_a = prev;
    m.node_b = static_cast<int>(s);
    m.height = static_cast<double>(s);
    m.new_node_id = static_cast<int>(n_leaves + s - 1);
    d.merges.push_back(m);
    prev = m.new_node_id;
  }
  return d;
}

}  // namespace

TEST_CASE("xml escaping covers the five reserved characters") {
  CHECK(tempattr::xml_escape("a<b>c&d\"e'f") ==
        "a&lt;b&gt;c&amp;d&quot;e&apos;f");
  CHECK(tempattr::xml_escape("plain") == "plain");
  CHECK(tempattr::xml_escape("") == "");
}

TEST_CASE("curve plot is well formed with one polyline per row") {
  const AttributionGrid grid = demo_grid(3, 6);
  CurvePlotOptions opt;
  opt.title = "demo";
  const std::string svg = tempattr::render_curves_svg(grid, opt);

  std::string err;
  CHECK_MESSAGE(xml_well_formed(svg, &err), err);
  CHECK(count_elements(svg, "svg") == 1);
  CHECK(count_elements(svg, "polyline") == 3);
  CHECK(svg.find(">demo</text>") != std::string::npos);
  CHECK(svg.find(">mask start</text>") != std::string::npos);
  CHECK(svg.find(">row_0</text>") != std::string::npos);
  CHECK(svg.find(">row_2</text>") != std::string::npos);
  // two axes, six tick marks per axis
  CHECK(count_elements(svg, "line") >= 14);
  CHECK(count_elements(svg, "text") >= 12);
}

TEST_CASE("rows with no present cells still emit an empty polyline") {
  std::vector<std::uint8_t> present(12, 1);
  for (int k = 0; k < 6; ++k) present[6 + k] = 0;  // second row all missing
  const AttributionGrid grid = demo_grid(2, 6, std::move(present));
  const std::string svg = tempattr::render_curves_svg(grid);
  std::string err;
  CHECK_MESSAGE(xml_well_formed(svg, &err), err);
  CHECK(count_elements(svg, "polyline") == 2);
  CHECK(svg.find("points=\"\"") != std::string::npos);
}

TEST_CASE("an entirely missing grid still renders") {
  const AttributionGrid grid = demo_grid(2, 4, std::vector<std::uint8_t>(8, 0));
  const std::string svg = tempattr::render_curves_svg(grid);
  std::string err;
  CHECK_MESSAGE(xml_well_formed(svg, &err), err);
  CHECK(count_elements(svg, "polyline") == 2);
}

TEST_CASE("legend truncates with a count of hidden rows") {
  CurvePlotOptions opt;
  opt.max_legend = 4;
  const std::string svg = tempattr::render_curves_svg(demo_grid(9, 3), opt);
  std::string err;
  CHECK_MESSAGE(xml_well_formed(svg, &err), err);
  CHECK(count_elements(svg, "polyline") == 9);
  CHECK(svg.find(">row_3</text>") != std::string::npos);
  CHECK(svg.find(">row_4</text>") == std::string::npos);
  CHECK(svg.find(">+5 more</text>") != std::string::npos);

  const std::string full = tempattr::render_curves_svg(demo_grid(9, 3));
  CHECK(full.find("more</text>") == std::string::npos);
  CHECK(full.find(">row_8</text>") != std::string::npos);
}

TEST_CASE("labels with markup characters are escaped in the output") {
  std::vector<std::string> ids{"a<b&\"c\"", "d>'e'"};
  RowMajorMatrixXd values(2, 2);
  values << 0.0, 1.0, 1.0, 0.0;
  const AttributionGrid grid(MetricKind::M1MaskedVsTruePearson, std::move(ids),
                             {0, 10}, 5, std::move(values),
                             std::vector<std::uint8_t>(4, 1));
  CurvePlotOptions opt;
  opt.title = "t<>&";
  opt.y_label = "y&z";
  const std::string svg = tempattr::render_curves_svg(grid, opt);
  std::string err;
  CHECK_MESSAGE(xml_well_formed(svg, &err), err);
  CHECK(svg.find(">a&lt;b&amp;&quot;c&quot;</text>") != std::string::npos);
  CHECK(svg.find(">d&gt;&apos;e&apos;</text>") != std::string::npos);
  CHECK(svg.find(">t&lt;&gt;&amp;</text>") != std::string::npos);
  CHECK(svg.find(">y&amp;z</text>") != std::string::npos);
  CHECK(svg.find("a<b") == std::string::npos);
}

TEST_CASE("a grid with no columns cannot be plotted") {
  std::vector<std::string> ids{"r"};
  const AttributionGrid grid(MetricKind::M2DeltaPredTruePearson, std::move(ids), {},
                             5, RowMajorMatrixXd(1, 0), {});
  CHECK(code_of([&] { tempattr::render_curves_svg(grid); }) ==
        ErrorCode::EmptyInput);
}

TEST_CASE("dendrogram plot draws three segments per merge") {
  const Dendrogram dend = demo_dendrogram(5);
  const std::string svg = tempattr::render_dendrogram_svg(dend);
  std::string err;
  CHECK_MESSAGE(xml_well_formed(svg, &err), err);
  // height axis + 6 ticks + 3 lines per merge
  CHECK(count_elements(svg, "line") == 7 + 3 * 4);
  for (int i = 0; i < 5; ++i) {
    const std::string label = ">leaf_" + std::to_string(i) + "</text>";
    CHECK(svg.find(label) != std::string::npos);
  }
  CHECK(svg.find("rotate(-90") == std::string::npos);  // 5 leaves fit upright
}

TEST_CASE("crowded dendrogram leaves rotate and stay escaped") {
  Dendrogram dend = demo_dendrogram(14);
  dend.leaf_labels[3] = "x<3>&";
  const std::string svg = tempattr::render_dendrogram_svg(dend);
  std::string err;
  CHECK_MESSAGE(xml_well_formed(svg, &err), err);
  CHECK(svg.find("rotate(-90") != std::string::npos);
  CHECK(svg.find(">x&lt;3&gt;&amp;</text>") != std::string::npos);
  CHECK(count_elements(svg, "line") == 7 + 3 * 13);
}

TEST_CASE("two leaf dendrogram renders a single bridge") {
  const Dendrogram dend = demo_dendrogram(2);
  const std::string svg = tempattr::render_dendrogram_svg(dend);
  std::string err;
  CHECK_MESSAGE(xml_well_formed(svg, &err), err);
  CHECK(count_elements(svg, "line") == 7 + 3);
}
