#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gazekit/image.hpp"
#include "gazekit/ingest.hpp"
#include "gazekit/trace.hpp"

namespace gazekit {

struct ChannelRange {
  std::uint8_t min = 0;
  std::uint8_t max = 255;
  bool contains(std::uint8_t v) const noexcept { return v >= min && v <= max; }
  friend bool operator==(const ChannelRange&, const ChannelRange&) = default;
};

/// Colour rule and blob-size window for the rendered gaze marker. Defaults
/// select saturated green: G >= 200, R <= 100, B <= 100.
struct MarkerSpec {
  ChannelRange r{0, 100};
  ChannelRange g{200, 255};
  ChannelRange b{0, 100};
  int min_blob_area = 4;
  std::optional<int> max_blob_area;

  bool matches(std::uint8_t pr, std::uint8_t pg, std::uint8_t pb) const noexcept {
    return g.contains(pg) && r.contains(pr) && b.contains(pb);
  }
  bool matches(Rgb c) const noexcept { return matches(c.r, c.g, c.b); }

  /// Throws DataError on min > max or a non-positive area bound.
  void validate() const;

  friend bool operator==(const MarkerSpec&, const MarkerSpec&) = default;
};

struct PixelPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

/// A 4-connected component of marker-coloured pixels.
struct Blob {
  std::int64_t area = 0;
  std::int64_t sum_x = 0;
  std::int64_t sum_y = 0;
  PixelPoint first;  // top-left-most pixel in (y, x) order

  /// Centroid rounded half-up to whole pixels.
  PixelPoint centroid() const noexcept;
};

/// All marker-coloured components, ordered by their first pixel.
std::vector<Blob> marker_blobs(const ImageView& pane, const MarkerSpec& spec);

/// Centroid of the largest component whose area lies in the spec's window.
/// Equal areas resolve to the component that starts first in raster order.
std::optional<PixelPoint> detect_marker(const ImageView& pane, const MarkerSpec& spec);

struct ExtractOptions {
  /// Worker threads for per-frame detection; 1 runs inline.
  unsigned threads = 1;
};

/// Run marker detection on the gaze pane of every frame. One sample per frame;
/// frames without a marker give invalid samples. Scene coordinates are the
/// pane-local coordinates, so the scene has the gaze pane's size.
GazeTrace extract_trace(FrameSource& source, const RecordingLayout& layout, const MarkerSpec& spec,
                        const TraceMetadata& meta, const ExtractOptions& options = {});

}  // namespace gazekit
