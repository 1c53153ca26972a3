#include "rap/exp/heatmap_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rap/csv.hpp"
#include "rap/errors.hpp"

namespace rap::exp {
namespace {

constexpr int kCellW = 84;
constexpr int kCellH = 48;
constexpr int kLeft = 90;
constexpr int kTop = 50;
constexpr int kBottom = 60;

// Ramp endpoints: deep indigo to pale yellow.
constexpr double kDark[3] = {30, 16, 72};
constexpr double kBright[3] = {250, 236, 120};

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string cell_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

}  // namespace

std::string ramp_color(double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.5, 0.0, 1.0);
  char buf[8];
  int rgb[3];
  for (int i = 0; i < 3; ++i) rgb[i] = static_cast<int>(std::lround(kDark[i] + (kBright[i] - kDark[i]) * t));
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string heatmap_svg(const eval::TransferGrid& grid, std::string_view title) {
  const auto rows = grid.mass_values.size();
  const auto cols = grid.friction_values.size();
  if (rows == 0 || cols == 0 || grid.scores.size() != rows)
    throw ConfigError("heatmap_svg: grid is empty or inconsistent");

  const double lo = grid.min_mean();
  const double hi = grid.max_mean();
  const bool flat = !(hi > lo);
  const int width = kLeft + static_cast<int>(cols) * kCellW + 20;
  const int height = kTop + static_cast<int>(rows) * kCellH + kBottom;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\">\n";
  if (!title.empty())
    svg << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
        << "</text>\n";

  for (std::size_t m = 0; m < rows; ++m) {
    // Mass increases upward.
    const int y = kTop + static_cast<int>(rows - 1 - m) * kCellH;
    for (std::size_t f = 0; f < cols; ++f) {
      const int x = kLeft + static_cast<int>(f) * kCellW;
      const double v = grid.scores[m][f].mean;
      const double t = flat ? 0.5 : (v - lo) / (hi - lo);
      svg << "  <rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kCellW << "\" height=\""
          << kCellH << "\" fill=\"" << ramp_color(t) << "\" data-mass=\"" << format_double(grid.mass_values[m])
          << "\" data-friction=\"" << format_double(grid.friction_values[f]) << "\" data-mean=\""
          << format_double(v) << "\"/>\n";
      svg << "  <text class=\"value\" x=\"" << x + kCellW / 2 << "\" y=\"" << y + kCellH / 2 + 5
          << "\" text-anchor=\"middle\" font-size=\"13\" fill=\"" << (t < 0.55 ? "#ffffff" : "#000000") << "\">"
          << cell_label(v) << "</text>\n";
    }
    svg << "  <text class=\"ytick\" x=\"" << kLeft - 8 << "\" y=\"" << y + kCellH / 2 + 5
        << "\" text-anchor=\"end\" font-size=\"12\">" << label(grid.mass_values[m]) << "</text>\n";
  }
  const int axis_y = kTop + static_cast<int>(rows) * kCellH;
  for (std::size_t f = 0; f < cols; ++f)
    svg << "  <text class=\"xtick\" x=\"" << kLeft + static_cast<int>(f) * kCellW + kCellW / 2 << "\" y=\""
        << axis_y + 18 << "\" text-anchor=\"middle\" font-size=\"12\">" << label(grid.friction_values[f])
        << "</text>\n";
  svg << "  <text x=\"" << kLeft + static_cast<int>(cols) * kCellW / 2 << "\" y=\"" << axis_y + 42
      << "\" text-anchor=\"middle\" font-size=\"13\">friction coefficient</text>\n";
  svg << "  <text x=\"18\" y=\"" << kTop + static_cast<int>(rows) * kCellH / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << kTop + static_cast<int>(rows) * kCellH / 2 << ")\">mass coefficient</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void emit_heatmap_svg(const eval::TransferGrid& grid, const std::filesystem::path& path, std::string_view title) {
  const auto text = heatmap_svg(grid, title);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace rap::exp
