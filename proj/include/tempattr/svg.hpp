#pragma once

#include <string>
#include <string_view>

#include "tempattr/clustering.hpp"
#include "tempattr/masking.hpp"

namespace tempattr {

std::string xml_escape(std::string_view text);

struct CurvePlotOptions {
  int width = 960;
  int height = 540;
  std::string title;
  std::string x_label = "mask start";
  std::string y_label = "value";
  std::size_t max_legend = 24;
};

/// Hand-emitted SVG 1.1 line plot: exactly one polyline per grid row (missing
/// cells skipped), axes with tick labels, legend. No rendering dependency.
std::string render_curves_svg(const AttributionGrid& grid,
                              const CurvePlotOptions& options = {});

struct DendrogramPlotOptions {
  int width = 960;
  int height = 540;
  std::string title;
};

/// Orthogonal dendrogram, merge heights to scale, leaf labels along the
/// bottom (rotated when crowded).
std::string render_dendrogram_svg(const Dendrogram& dend,
                                  const DendrogramPlotOptions& options = {});

}  // namespace tempattr
