#include "gazekit/trace.hpp"

#include <algorithm>
#include <string>

#include "gazekit/error.hpp"

namespace gazekit {

std::string_view to_string(SkillGroup g) noexcept {
  switch (g) {
    case SkillGroup::MiddleSkill:
      return "MiddleSkill";
    case SkillGroup::HighSkill:
      return "HighSkill";
    case SkillGroup::Unspecified:
      break;
  }
  return "Unspecified";
}

SkillGroup parse_skill_group(std::string_view s) {
  if (s == "MiddleSkill") return SkillGroup::MiddleSkill;
  if (s == "HighSkill") return SkillGroup::HighSkill;
  if (s == "Unspecified") return SkillGroup::Unspecified;
  throw DataError("unknown group '" + std::string(s) + "' (expected MiddleSkill, HighSkill or Unspecified)");
}

std::size_t GazeTrace::n_valid() const noexcept {
  return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.valid; }));
}

void GazeTrace::validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (i > 0 && s.frame_id <= samples[i - 1].frame_id) {
      throw DataError("frame ids not strictly increasing at frame " + std::to_string(s.frame_id));
    }
    if (s.valid && (s.x < 0 || s.x >= scene_width || s.y < 0 || s.y >= scene_height)) {
      throw DataError("sample at frame " + std::to_string(s.frame_id) + " lies outside the " +
                      std::to_string(scene_width) + "x" + std::to_string(scene_height) + " scene");
    }
  }
}

}  // namespace gazekit
