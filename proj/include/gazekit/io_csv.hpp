#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gazekit/metrics.hpp"
#include "gazekit/stats.hpp"
#include "gazekit/trace.hpp"

namespace gazekit {

/// Write through a sibling temporary file and rename on success, so a failed
/// write never leaves a partial file at `path`.
void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

/// Reals in every CSV the toolkit writes: 6 significant digits, trailing
/// zeros kept (0.5 -> "0.500000").
std::string format_real(double v);

// Per-frame gaze file: header `frame_id,x,y,roi`, one row per sample, LF line
// endings. Undetected frames have x, y and roi all empty.

void write_output_csv(const GazeTrace& trace, std::ostream& out);
void write_output_csv(const GazeTrace& trace, const std::filesystem::path& path);

GazeTrace read_output_csv(std::istream& in, int scene_width, int scene_height, const TraceMetadata& meta = {});
GazeTrace read_output_csv(const std::filesystem::path& path, int scene_width, int scene_height,
                          const TraceMetadata& meta = {});

struct SessionRow {
  TraceMetadata meta;
  SessionMetrics metrics;
  std::optional<MatchStats> match;
};

/// One row per session. Columns: participant_id, group, trial_id, n_valid,
/// valid_fraction, sd_x, sd_y, mean_x, mean_y, dist_center, then pct_<label>
/// for each label, then kills, deaths, assists, kda when any row has match data.
void write_metrics_csv(const std::vector<SessionRow>& rows, std::ostream& out,
                       const std::vector<std::string>& labels = default_roi_labels());
void write_metrics_csv(const std::vector<SessionRow>& rows, const std::filesystem::path& path,
                       const std::vector<std::string>& labels = default_roi_labels());

struct MatchRecord {
  std::string participant_id;
  std::string trial_id;
  MatchStats stats;
};

/// Match log with header `participant_id,trial_id,kills,deaths,assists`.
std::vector<MatchRecord> read_match_log(std::istream& in);
std::vector<MatchRecord> read_match_log(const std::filesystem::path& path);

/// One observational unit (a participant or a session) for group comparison
/// and correlation.
struct Observation {
  std::string key;
  std::string group;
  std::map<std::string, double> values;
};

struct ObservationTable {
  std::vector<std::string> variables;  // first-seen order
  std::vector<Observation> rows;       // first-seen order
};

/// Accepts either the long format `participant_id,group,variable,value`
/// (one observation per participant) or a metrics CSV (one per session,
/// every numeric column after trial_id is a variable).
ObservationTable read_observation_table(std::istream& in);
ObservationTable read_observation_table(const std::filesystem::path& path);

struct ComparisonRow {
  std::string variable;
  stats::TestResult result;
};

/// Header `variable,method,statistic,df,p,effect_size,route`.
void write_comparison_csv(const std::vector<ComparisonRow>& rows, std::ostream& out);

struct CorrelationRow {
  std::string x;
  std::string y;
  stats::TestResult result;
};

/// Header `x,y,method,coefficient,statistic,df,p,n,route`.
void write_correlation_csv(const std::vector<CorrelationRow>& rows, std::ostream& out);

/// Split one CSV line on commas (no quoting). A trailing CR is dropped.
std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace gazekit
