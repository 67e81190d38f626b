#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazekit {

enum class SkillGroup { MiddleSkill, HighSkill, Unspecified };

std::string_view to_string(SkillGroup g) noexcept;
/// Accepts the exact enumerator names; anything else is a DataError.
SkillGroup parse_skill_group(std::string_view s);

/// One frame's detected gaze point in game-scene pixels. When `valid` is false
/// the coordinates and label carry no meaning.
struct GazeSample {
  std::uint64_t frame_id = 0;
  int x = 0;
  int y = 0;
  bool valid = false;
  std::optional<std::string> roi;

  friend bool operator==(const GazeSample&, const GazeSample&) = default;
};

struct TraceMetadata {
  std::string participant_id;
  SkillGroup group = SkillGroup::Unspecified;
  std::string trial_id;
  double nominal_rate = 90.0;

  friend bool operator==(const TraceMetadata&, const TraceMetadata&) = default;
};

struct GazeTrace {
  std::vector<GazeSample> samples;
  int scene_width = 1920;
  int scene_height = 1080;
  TraceMetadata meta;

  std::size_t n_valid() const noexcept;
  /// Throws DataError unless frame ids strictly increase and every valid
  /// sample lies inside the scene.
  void validate() const;

  friend bool operator==(const GazeTrace&, const GazeTrace&) = default;
};

}  // namespace gazekit
