#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazekit {

struct ScatterSeries {
  std::string group;
  std::vector<double> x;
  std::vector<double> y;
};

/// Deterministic SVG scatter plot of one variable pair, one colour per group,
/// with the least-squares line over all points. Slope and intercept are
/// carried in the <title> and in data-* attributes of the line element.
std::string scatter_svg(const std::vector<ScatterSeries>& series, std::string_view x_label, std::string_view y_label);

}  // namespace gazekit
