#include "gazekit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "gazekit/error.hpp"
#include "gazekit/io_csv.hpp"
#include "gazekit/stats.hpp"

namespace gazekit {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 480;
constexpr double kMarginLeft = 70;
constexpr double kMarginRight = 20;
constexpr double kMarginTop = 40;
constexpr double kMarginBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi == lo) {
      lo -= 1;
      hi += 1;
    }
    const double margin = 0.05 * (hi - lo);
    lo -= margin;
    hi += margin;
  }
};

}  // namespace

std::string scatter_svg(const std::vector<ScatterSeries>& series, std::string_view x_label, std::string_view y_label) {
  std::vector<double> all_x;
  std::vector<double> all_y;
  Range rx;
  Range ry;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw DataError("scatter series '" + s.group + "' has unequal x/y lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) throw DataError("scatter point is not finite");
      rx.add(s.x[i]);
      ry.add(s.y[i]);
      all_x.push_back(s.x[i]);
      all_y.push_back(s.y[i]);
    }
  }
  if (all_x.size() < 2) throw DataError("scatter plot needs at least 2 points");
  const stats::LinearFit fit = stats::least_squares(all_x, all_y);
  rx.pad();
  ry.pad();

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double v) { return kMarginLeft + (v - rx.lo) / (rx.hi - rx.lo) * plot_w; };
  auto sy = [&](double v) { return kMarginTop + plot_h - (v - ry.lo) / (ry.hi - ry.lo) * plot_h; };

  std::ostringstream svg;
  const std::string title = std::string(y_label) + " vs " + std::string(x_label) + " (slope=" + format_real(fit.slope) +
                            ", intercept=" + format_real(fit.intercept) + ")";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "  <title>" << escape(title) << "</title>\n";
  svg << "  <defs><clipPath id=\"plot-area\"><rect x=\"" << px(kMarginLeft) << "\" y=\"" << px(kMarginTop)
      << "\" width=\"" << px(plot_w) << "\" height=\"" << px(plot_h) << "\"/></clipPath></defs>\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "  <rect x=\"" << px(kMarginLeft) << "\" y=\"" << px(kMarginTop) << "\" width=\"" << px(plot_w)
      << "\" height=\"" << px(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Axis tick labels at the ends of each range.
  svg << "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "    <text x=\"" << px(kMarginLeft) << "\" y=\"" << px(kHeight - kMarginBottom + 15) << "\">"
      << format_real(rx.lo) << "</text>\n";
  svg << "    <text x=\"" << px(kWidth - kMarginRight) << "\" y=\"" << px(kHeight - kMarginBottom + 15)
      << "\" text-anchor=\"end\">" << format_real(rx.hi) << "</text>\n";
  svg << "    <text x=\"" << px(kMarginLeft - 5) << "\" y=\"" << px(kHeight - kMarginBottom)
      << "\" text-anchor=\"end\">" << format_real(ry.lo) << "</text>\n";
  svg << "    <text x=\"" << px(kMarginLeft - 5) << "\" y=\"" << px(kMarginTop + 10) << "\" text-anchor=\"end\">"
      << format_real(ry.hi) << "</text>\n";
  svg << "    <text x=\"" << px(kMarginLeft + plot_w / 2) << "\" y=\"" << px(kHeight - 20)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(x_label) << "</text>\n";
  svg << "    <text x=\"15\" y=\"" << px(kMarginTop + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 15 " << px(kMarginTop + plot_h / 2) << ")\">" << escape(y_label) << "</text>\n";
  svg << "  </g>\n";

  for (std::size_t g = 0; g < series.size(); ++g) {
    const char* colour = kPalette[g % std::size(kPalette)];
    svg << "  <g class=\"series\" data-group=\"" << escape(series[g].group) << "\" fill=\"" << colour << "\">\n";
    for (std::size_t i = 0; i < series[g].x.size(); ++i) {
      svg << "    <circle cx=\"" << px(sx(series[g].x[i])) << "\" cy=\"" << px(sy(series[g].y[i])) << "\" r=\"4\"/>\n";
    }
    svg << "  </g>\n";
    svg << "  <text x=\"" << px(kMarginLeft + 5 + 110 * static_cast<double>(g)) << "\" y=\"25\" font-family=\"sans-serif\" "
        << "font-size=\"12\" fill=\"" << colour << "\">" << escape(series[g].group) << "</text>\n";
  }

  svg << "  <line class=\"regression\" data-slope=\"" << format_real(fit.slope) << "\" data-intercept=\""
      << format_real(fit.intercept) << "\" x1=\"" << px(sx(rx.lo)) << "\" y1=\"" << px(sy(fit.intercept + fit.slope * rx.lo))
      << "\" x2=\"" << px(sx(rx.hi)) << "\" y2=\"" << px(sy(fit.intercept + fit.slope * rx.hi))
      << "\" stroke=\"black\" stroke-dasharray=\"6 4\" clip-path=\"url(#plot-area)\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gazekit
