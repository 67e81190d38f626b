#include "gazekit/roi.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "gazekit/config.hpp"
#include "gazekit/error.hpp"

namespace gazekit {

bool is_valid_label(std::string_view label) noexcept {
  return !label.empty() && std::all_of(label.begin(), label.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

RoiLayout::RoiLayout(int scene_width, int scene_height, std::vector<Region> regions, std::string fallback)
    : scene_width_(scene_width), scene_height_(scene_height), regions_(std::move(regions)), fallback_(std::move(fallback)) {
  if (scene_width <= 0 || scene_height <= 0) throw DataError("ROI scene dimensions must be positive");
  if (!is_valid_label(fallback_)) throw DataError("fallback label '" + fallback_ + "' is not [a-z0-9_]+");
  std::set<std::string> names;
  std::set<int> priorities;
  for (const Region& r : regions_) {
    if (!is_valid_label(r.name)) throw DataError("region name '" + r.name + "' is not [a-z0-9_]+");
    if (!names.insert(r.name).second) throw DataError("duplicate region name '" + r.name + "'");
    if (!priorities.insert(r.priority).second) {
      throw DataError("region '" + r.name + "' reuses priority " + std::to_string(r.priority));
    }
    if (r.name == fallback_) throw DataError("region '" + r.name + "' has the fallback's name");
    if (r.rect.w <= 0 || r.rect.h <= 0) throw DataError("region '" + r.name + "' is empty");
    if (!r.rect.inside(scene_width, scene_height)) {
      throw DataError("region '" + r.name + "' extends outside the " + std::to_string(scene_width) + "x" +
                      std::to_string(scene_height) + " scene");
    }
  }
  by_priority_.resize(regions_.size());
  std::iota(by_priority_.begin(), by_priority_.end(), std::size_t{0});
  std::sort(by_priority_.begin(), by_priority_.end(),
            [this](std::size_t a, std::size_t b) { return regions_[a].priority > regions_[b].priority; });
}

RoiLayout RoiLayout::valorant_default() { return default_config().roi; }

std::vector<std::string> RoiLayout::labels() const {
  std::vector<std::string> out;
  out.reserve(regions_.size() + 1);
  for (const Region& r : regions_) out.push_back(r.name);
  out.push_back(fallback_);
  return out;
}

const std::string& RoiLayout::classify(int x, int y) const {
  if (x < 0 || x >= scene_width_ || y < 0 || y >= scene_height_) {
    throw DataError("point (" + std::to_string(x) + "," + std::to_string(y) + ") outside the scene");
  }
  for (std::size_t i : by_priority_) {
    if (regions_[i].rect.contains(x, y)) return regions_[i].name;
  }
  return fallback_;
}

RoiLayout load_roi_layout(std::string_view config_text) { return load_config(config_text).roi; }

GazeTrace annotate_trace(GazeTrace trace, const RoiLayout& layout) {
  if (trace.scene_width != layout.scene_width() || trace.scene_height != layout.scene_height()) {
    throw DataError("trace scene " + std::to_string(trace.scene_width) + "x" + std::to_string(trace.scene_height) +
                    " does not match ROI scene " + std::to_string(layout.scene_width()) + "x" +
                    std::to_string(layout.scene_height()));
  }
  for (GazeSample& s : trace.samples) {
    if (s.valid) {
      s.roi = layout.classify(s.x, s.y);
    } else {
      s.roi.reset();
    }
  }
  return trace;
}

}  // namespace gazekit
