#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gazekit/trace.hpp"

namespace gazekit {

struct PointF {
  double x = 0;
  double y = 0;
};

/// The five labels of the shipped layout, in report column order.
const std::vector<std::string>& default_roi_labels();

struct SessionMetrics {
  double sd_x = 0;
  double sd_y = 0;
  double mean_x = 0;
  double mean_y = 0;
  double dist_center = 0;
  std::map<std::string, double> roi_pct;
  double valid_fraction = 0;
  std::size_t n_valid = 0;
};

struct MatchStats {
  int kills = 0;
  int deaths = 0;
  int assists = 0;

  double kda() const;
};

// All metrics use valid samples only. Each throws DataError when the trace has
// too few valid samples for the quantity to exist.

/// Per-axis sample standard deviation (n - 1 denominator). Needs n_valid >= 2.
std::pair<double, double> gaze_sd(const GazeTrace& trace);

PointF mean_gaze(const GazeTrace& trace);

/// Euclidean distance from the scene midpoint (real-valued, W/2, H/2) to the
/// mean gaze position.
double dist_from_center(const GazeTrace& trace);

/// Fraction of valid samples per label. Every label in `labels` is reported
/// (absent ones as 0); labels found in the trace but not listed are reported
/// as well. Throws on a valid sample with no label.
std::map<std::string, double> roi_percentages(const GazeTrace& trace,
                                              const std::vector<std::string>& labels = default_roi_labels());

/// (kills + assists) / max(deaths, 1).
double kda(int kills, int deaths, int assists);

SessionMetrics session_metrics(const GazeTrace& trace,
                               const std::vector<std::string>& labels = default_roi_labels());

}  // namespace gazekit
