#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gazekit/detect.hpp"
#include "gazekit/ingest.hpp"
#include "gazekit/roi.hpp"

namespace gazekit {

/// Everything one analysis run needs to know about the recording: pane
/// placement, ROI rectangles and the marker colour rule. Loaded from a single
/// JSON document (schema in docs/formats.md).
struct AnalysisConfig {
  RecordingLayout layout;
  RoiLayout roi;
  MarkerSpec marker;

  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

const AnalysisConfig& default_config();

/// Sections missing from the document keep their defaults; unknown keys and
/// ill-typed values are DataErrors naming the offending key or entry.
AnalysisConfig load_config(std::string_view text);
AnalysisConfig load_config_file(const std::filesystem::path& path);

/// Serialise back to the JSON document format (stable key order, 2-space indent).
std::string to_json_text(const AnalysisConfig& config);

}  // namespace gazekit
