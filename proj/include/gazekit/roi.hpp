#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gazekit/image.hpp"
#include "gazekit/trace.hpp"

namespace gazekit {

struct Region {
  std::string name;
  Rect rect;
  int priority = 0;  // larger wins where rectangles overlap

  friend bool operator==(const Region&, const Region&) = default;
};

/// Named, prioritised rectangles over the game scene plus a fallback label for
/// points no rectangle claims. Immutable once constructed.
class RoiLayout {
 public:
  /// Throws DataError naming the offending entry on a duplicate name or
  /// priority, a rectangle outside the scene, or a bad label.
  RoiLayout(int scene_width, int scene_height, std::vector<Region> regions, std::string fallback = "other");

  /// The shipped VALORANT HUD geometry on a 1920×1080 scene: center,
  /// mini_map, info1, info2 and the fallback "other".
  static RoiLayout valorant_default();

  int scene_width() const noexcept { return scene_width_; }
  int scene_height() const noexcept { return scene_height_; }
  const std::vector<Region>& regions() const noexcept { return regions_; }
  const std::string& fallback() const noexcept { return fallback_; }

  /// Region names in declaration order followed by the fallback.
  std::vector<std::string> labels() const;

  /// Highest-priority region containing the point (half-open edges), else the
  /// fallback. Throws DataError for a point outside the scene.
  const std::string& classify(int x, int y) const;

  friend bool operator==(const RoiLayout&, const RoiLayout&) = default;

 private:
  int scene_width_;
  int scene_height_;
  std::vector<Region> regions_;
  std::vector<std::size_t> by_priority_;  // indices into regions_, highest priority first
  std::string fallback_;
};

/// Labels are restricted to [a-z0-9_]+ so CSV output never needs quoting.
bool is_valid_label(std::string_view label) noexcept;

/// Parse the ROI part (scene, regions, fallback) of a JSON config document.
RoiLayout load_roi_layout(std::string_view config_text);

/// Label every valid sample. Coordinates, validity and count are untouched;
/// invalid samples lose any label they had.
GazeTrace annotate_trace(GazeTrace trace, const RoiLayout& layout);

}  // namespace gazekit
