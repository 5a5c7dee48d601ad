#include "tempattr/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "tempattr/io.hpp"

namespace tempattr {

namespace {

constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) {
  // two-decimal pixel grid keeps files small and byte-stable
  double r = std::round(v * 100.0) / 100.0;
  if (r == 0.0) r = 0.0;  // normalize -0
  return format_double(r);
}

void open_svg(std::string& out, int width, int height) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
  out += std::to_string(width);
  out += "\" height=\"";
  out += std::to_string(height);
  out += "\" viewBox=\"0 0 " + std::to_string(width) + " " +
         std::to_string(height) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" fill=\"#ffffff\"/>\n";
}

void line(std::string& out, double x1, double y1, double x2, double y2,
          const char* stroke, const char* extra = "") {
  out += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
         "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\"" + extra + "/>\n";
}

void text(std::string& out, double x, double y, const std::string& content,
          const char* extra = "") {
  out += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\"" + extra + ">" +
         xml_escape(content) + "</text>\n";
}

std::string tick_label(double v) {
  char buf[32];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 4);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("?");
}

}  // namespace

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_curves_svg(const AttributionGrid& grid,
                              const CurvePlotOptions& options) {
  const Eigen::Index n_rows = grid.n_rows();
  const Eigen::Index n_cols = grid.n_cols();
  if (n_cols == 0) {
    throw Error(ErrorCode::EmptyInput, "render_curves_svg: grid has no columns");
  }
  const double left = 70.0, right = 190.0, top = 46.0, bottom = 56.0;
  const double plot_w = options.width - left - right;
  const double plot_h = options.height - top - bottom;

  double x_min = static_cast<double>(grid.starts().front());
  double x_max = static_cast<double>(grid.starts().back());
  if (x_max == x_min) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    for (Eigen::Index k = 0; k < n_cols; ++k) {
      if (!grid.is_present(i, k)) continue;
      y_min = std::min(y_min, grid.values()(i, k));
      y_max = std::max(y_max, grid.values()(i, k));
    }
  }
  if (!(y_min <= y_max)) {  // every cell missing
    y_min = 0.0;
    y_max = 1.0;
  }
  if (y_max == y_min) {
    y_min -= 1.0;
    y_max += 1.0;
  } else {
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;
  }

  auto px = [&](double v) { return left + (v - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double v) {
    return top + plot_h - (v - y_min) / (y_max - y_min) * plot_h;
  };

  std::string out;
  open_svg(out, options.width, options.height);
  if (!options.title.empty()) {
    text(out, options.width / 2.0, 24.0, options.title,
         " font-size=\"16\" text-anchor=\"middle\" font-family=\"sans-serif\"");
  }

  line(out, left, top, left, top + plot_h, "#000000");
  line(out, left, top + plot_h, left + plot_w, top + plot_h, "#000000");
  const int n_ticks = 5;
  for (int t = 0; t <= n_ticks; ++t) {
    const double f = static_cast<double>(t) / n_ticks;
    const double xv = x_min + f * (x_max - x_min);
    const double yv = y_min + f * (y_max - y_min);
    line(out, px(xv), top + plot_h, px(xv), top + plot_h + 5, "#000000");
    text(out, px(xv), top + plot_h + 20, tick_label(xv),
         " font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\"");
    line(out, left - 5, py(yv), left, py(yv), "#000000");
    text(out, left - 8, py(yv) + 4, tick_label(yv),
         " font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\"");
  }
  text(out, left + plot_w / 2.0, options.height - 12.0, options.x_label,
       " font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\"");
  out += "<text x=\"18\" y=\"" + num(top + plot_h / 2.0) +
         "\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\""
         " transform=\"rotate(-90 18 " +
         num(top + plot_h / 2.0) + ")\">" + xml_escape(options.y_label) +
         "</text>\n";

  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const char* color = kPalette[static_cast<std::size_t>(i) % kPaletteSize];
    std::string points;
    for (Eigen::Index k = 0; k < n_cols; ++k) {
      if (!grid.is_present(i, k)) continue;
      if (!points.empty()) points += ' ';
      points += num(px(static_cast<double>(grid.starts()[k]))) + "," +
                num(py(grid.values()(i, k)));
    }
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
  }

  const double lx = left + plot_w + 14.0;
  double ly = top + 6.0;
  const std::size_t shown =
      std::min<std::size_t>(options.max_legend, static_cast<std::size_t>(n_rows));
  for (std::size_t i = 0; i < shown; ++i) {
    const char* color = kPalette[i % kPaletteSize];
    line(out, lx, ly, lx + 18, ly, color, " stroke-width=\"2\"");
    text(out, lx + 24, ly + 4, grid.row_ids()[i],
         " font-size=\"11\" font-family=\"sans-serif\"");
    ly += 16.0;
  }
  if (static_cast<std::size_t>(n_rows) > shown) {
    text(out, lx, ly + 4,
         "+" + std::to_string(n_rows - static_cast<Eigen::Index>(shown)) +
             " more",
         " font-size=\"11\" font-family=\"sans-serif\" font-style=\"italic\"");
  }

  out += "</svg>\n";
  return out;
}

std::string render_dendrogram_svg(const Dendrogram& dend,
                                  const DendrogramPlotOptions& options) {
  const Eigen::Index n = dend.n_leaves;
  const double left = 70.0, right = 24.0, top = 46.0, bottom = 110.0;
  const double plot_w = options.width - left - right;
  const double plot_h = options.height - top - bottom;

  // leaf display order: traverse the final tree left-to-right
  const int total_nodes = static_cast<int>(n + dend.merges.size());
  std::vector<int> child_a(total_nodes, -1), child_b(total_nodes, -1);
  for (const Merge& m : dend.merges) {
    child_a[m.new_node_id] = m.node_a;
    child_b[m.new_node_id] = m.node_b;
  }
  std::vector<int> leaf_order;
  leaf_order.reserve(n);
  std::vector<int> stack;
  stack.push_back(total_nodes - 1);
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    if (child_a[node] < 0) {
      leaf_order.push_back(node);
    } else {
      stack.push_back(child_b[node]);
      stack.push_back(child_a[node]);
    }
  }

  double h_max = 0.0;
  for (const Merge& m : dend.merges) h_max = std::max(h_max, m.height);
  if (h_max <= 0.0) h_max = 1.0;

  std::vector<double> node_x(total_nodes, 0.0), node_h(total_nodes, 0.0);
  const double slot = n > 1 ? plot_w / static_cast<double>(n - 1) : 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    node_x[leaf_order[i]] =
        n > 1 ? left + slot * static_cast<double>(i) : left + plot_w / 2.0;
  }
  auto py = [&](double h) { return top + plot_h - h / h_max * plot_h; };

  std::string out;
  open_svg(out, options.width, options.height);
  if (!options.title.empty()) {
    text(out, options.width / 2.0, 24.0, options.title,
         " font-size=\"16\" text-anchor=\"middle\" font-family=\"sans-serif\"");
  }

  line(out, left - 10, top, left - 10, top + plot_h, "#000000");
  for (int t = 0; t <= 5; ++t) {
    const double h = h_max * t / 5.0;
    line(out, left - 15, py(h), left - 10, py(h), "#000000");
    text(out, left - 18, py(h) + 4, tick_label(h),
         " font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\"");
  }

  for (const Merge& m : dend.merges) {
    const double xa = node_x[m.node_a];
    const double xb = node_x[m.node_b];
    const double yp = py(m.height);
    line(out, xa, py(node_h[m.node_a]), xa, yp, "#1f77b4");
    line(out, xb, py(node_h[m.node_b]), xb, yp, "#1f77b4");
    line(out, xa, yp, xb, yp, "#1f77b4");
    node_x[m.new_node_id] = (xa + xb) / 2.0;
    node_h[m.new_node_id] = m.height;
  }

  const bool rotate = n > 12;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int leaf = leaf_order[i];
    const double x = node_x[leaf];
    if (rotate) {
      out += "<text x=\"" + num(x) + "\" y=\"" + num(top + plot_h + 12.0) +
             "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\""
             " transform=\"rotate(-90 " +
             num(x) + " " + num(top + plot_h + 12.0) + ")\">" +
             xml_escape(dend.leaf_labels[leaf]) + "</text>\n";
    } else {
      text(out, x, top + plot_h + 18.0, dend.leaf_labels[leaf],
           " font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\"");
    }
  }

  out += "</svg>\n";
  return out;
}

}  // namespace tempattr
