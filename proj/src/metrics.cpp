#include "gazekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

void require_valid(const GazeTrace& trace, std::size_t at_least, const char* what) {
  const std::size_t n = trace.n_valid();
  if (n < at_least) {
    throw DataError(std::string(what) + " needs at least " + std::to_string(at_least) + " valid samples, trace has " +
                    std::to_string(n));
  }
}

}  // namespace

const std::vector<std::string>& default_roi_labels() {
  static const std::vector<std::string> labels{"center", "mini_map", "info1", "info2", "other"};
  return labels;
}

double MatchStats::kda() const { return gazekit::kda(kills, deaths, assists); }

std::pair<double, double> gaze_sd(const GazeTrace& trace) {
  require_valid(trace, 2, "gaze SD");
  const PointF mean = mean_gaze(trace);
  double ssx = 0;
  double ssy = 0;
  std::size_t n = 0;
  for (const auto& s : trace.samples) {
    if (!s.valid) continue;
    ssx += (s.x - mean.x) * (s.x - mean.x);
    ssy += (s.y - mean.y) * (s.y - mean.y);
    ++n;
  }
  const double denom = static_cast<double>(n - 1);
  return {std::sqrt(ssx / denom), std::sqrt(ssy / denom)};
}

PointF mean_gaze(const GazeTrace& trace) {
  require_valid(trace, 1, "mean gaze");
  // Integer sums are exact for any realistic session length.
  long long sx = 0;
  long long sy = 0;
  std::size_t n = 0;
  for (const auto& s : trace.samples) {
    if (!s.valid) continue;
    sx += s.x;
    sy += s.y;
    ++n;
  }
  return {static_cast<double>(sx) / static_cast<double>(n), static_cast<double>(sy) / static_cast<double>(n)};
}

double dist_from_center(const GazeTrace& trace) {
  const PointF m = mean_gaze(trace);
  return std::hypot(m.x - trace.scene_width / 2.0, m.y - trace.scene_height / 2.0);
}

std::map<std::string, double> roi_percentages(const GazeTrace& trace, const std::vector<std::string>& labels) {
  require_valid(trace, 1, "ROI percentages");
  std::map<std::string, std::size_t> counts;
  for (const auto& label : labels) counts[label] = 0;
  std::size_t n = 0;
  for (const auto& s : trace.samples) {
    if (!s.valid) continue;
    if (!s.roi) throw DataError("valid sample at frame " + std::to_string(s.frame_id) + " has no ROI label");
    ++counts[*s.roi];
    ++n;
  }
  std::map<std::string, double> pct;
  for (const auto& [label, count] : counts) pct[label] = static_cast<double>(count) / static_cast<double>(n);
  return pct;
}

double kda(int kills, int deaths, int assists) {
  if (kills < 0 || deaths < 0 || assists < 0) throw DataError("match counts must be non-negative");
  return static_cast<double>(kills + assists) / static_cast<double>(std::max(deaths, 1));
}

SessionMetrics session_metrics(const GazeTrace& trace, const std::vector<std::string>& labels) {
  SessionMetrics m;
  if (trace.n_valid() == 0) throw DataError("session has no valid samples");
  std::tie(m.sd_x, m.sd_y) = gaze_sd(trace);
  const PointF mean = mean_gaze(trace);
  m.mean_x = mean.x;
  m.mean_y = mean.y;
  m.dist_center = dist_from_center(trace);
  m.roi_pct = roi_percentages(trace, labels);
  m.n_valid = trace.n_valid();
  m.valid_fraction = static_cast<double>(m.n_valid) / static_cast<double>(trace.samples.size());
  return m;
}

}  // namespace gazekit
