#include "gazekit/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "gazekit/error.hpp"
#include "json.hpp"

namespace gazekit {

namespace {

using nlohmann::json;

constexpr std::string_view kDefaultConfig = R"({
  "canvas": {"width": 1920, "height": 2160},
  "game_pane": {"x": 0, "y": 0, "w": 1920, "h": 1080},
  "gaze_pane": {"x": 0, "y": 1080, "w": 1920, "h": 1080},
  "scene": {"width": 1920, "height": 1080},
  "fallback": "other",
  "regions": [
    {"name": "center", "x": 760, "y": 340, "w": 400, "h": 400, "priority": 4},
    {"name": "mini_map", "x": 20, "y": 20, "w": 350, "h": 350, "priority": 3},
    {"name": "info1", "x": 660, "y": 0, "w": 600, "h": 110, "priority": 2},
    {"name": "info2", "x": 460, "y": 960, "w": 1000, "h": 120, "priority": 1}
  ],
  "marker": {"r": [0, 100], "g": [200, 255], "b": [0, 100], "min_blob_area": 4, "max_blob_area": null}
})";

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw DataError("unknown key '" + key + "' in " + where);
    }
  }
}

const json& require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw DataError(where + " must be a JSON object");
  return j;
}

int get_int(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(where + " is missing '" + key + "'");
  if (!it->is_number_integer()) throw DataError(where + "." + key + " must be an integer");
  return it->get<int>();
}

Rect parse_rect(const json& j, const std::string& where, std::initializer_list<std::string_view> extra = {}) {
  require_object(j, where);
  std::vector<std::string_view> known{"x", "y", "w", "h"};
  known.insert(known.end(), extra.begin(), extra.end());
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw DataError("unknown key '" + key + "' in " + where);
    }
  }
  return Rect{get_int(j, "x", where), get_int(j, "y", where), get_int(j, "w", where), get_int(j, "h", where)};
}

ChannelRange parse_channel(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw DataError(where + " must be a [min, max] pair of integers");
  }
  const int lo = j[0].get<int>();
  const int hi = j[1].get<int>();
  if (lo < 0 || lo > 255 || hi < 0 || hi > 255) throw DataError(where + " values must lie in 0..255");
  if (lo > hi) throw DataError(where + " has min > max");
  return {static_cast<std::uint8_t>(lo), static_cast<std::uint8_t>(hi)};
}

AnalysisConfig parse(const json& doc) {
  require_object(doc, "config");
  reject_unknown_keys(doc, {"canvas", "game_pane", "gaze_pane", "scene", "fallback", "regions", "marker"}, "config");

  // Defaults come from the built-in document; only recursion-free lookups here.
  static const json defaults = json::parse(kDefaultConfig);
  auto section = [&](const char* key) -> const json& { return doc.contains(key) ? doc[key] : defaults[key]; };

  const json& canvas = require_object(section("canvas"), "canvas");
  reject_unknown_keys(canvas, {"width", "height"}, "canvas");
  RecordingLayout layout(get_int(canvas, "width", "canvas"), get_int(canvas, "height", "canvas"),
                         parse_rect(section("game_pane"), "game_pane"), parse_rect(section("gaze_pane"), "gaze_pane"));

  int scene_w = layout.gaze_pane().w;
  int scene_h = layout.gaze_pane().h;
  if (doc.contains("scene")) {
    const json& scene = require_object(doc["scene"], "scene");
    reject_unknown_keys(scene, {"width", "height"}, "scene");
    scene_w = get_int(scene, "width", "scene");
    scene_h = get_int(scene, "height", "scene");
    if (scene_w != layout.gaze_pane().w || scene_h != layout.gaze_pane().h) {
      throw DataError("scene " + std::to_string(scene_w) + "x" + std::to_string(scene_h) +
                      " must match the gaze pane size " + std::to_string(layout.gaze_pane().w) + "x" +
                      std::to_string(layout.gaze_pane().h));
    }
  }

  const json& fallback_j = section("fallback");
  if (!fallback_j.is_string()) throw DataError("fallback must be a string");

  const json& regions_j = section("regions");
  if (!regions_j.is_array()) throw DataError("regions must be an array");
  std::vector<Region> regions;
  for (std::size_t i = 0; i < regions_j.size(); ++i) {
    const json& r = regions_j[i];
    std::string where = "regions[" + std::to_string(i) + "]";
    require_object(r, where);
    auto name_it = r.find("name");
    if (name_it == r.end() || !name_it->is_string()) throw DataError(where + " needs a string 'name'");
    where += " ('" + name_it->get<std::string>() + "')";
    regions.push_back(Region{name_it->get<std::string>(), parse_rect(r, where, {"name", "priority"}),
                             get_int(r, "priority", where)});
  }
  RoiLayout roi(scene_w, scene_h, std::move(regions), fallback_j.get<std::string>());

  MarkerSpec marker;
  const json& m = require_object(section("marker"), "marker");
  reject_unknown_keys(m, {"r", "g", "b", "min_blob_area", "max_blob_area"}, "marker");
  if (m.contains("r")) marker.r = parse_channel(m["r"], "marker.r");
  if (m.contains("g")) marker.g = parse_channel(m["g"], "marker.g");
  if (m.contains("b")) marker.b = parse_channel(m["b"], "marker.b");
  if (m.contains("min_blob_area")) marker.min_blob_area = get_int(m, "min_blob_area", "marker");
  if (m.contains("max_blob_area") && !m["max_blob_area"].is_null()) {
    marker.max_blob_area = get_int(m, "max_blob_area", "marker");
  }
  marker.validate();

  return AnalysisConfig{layout, std::move(roi), marker};
}

}  // namespace

const AnalysisConfig& default_config() {
  static const AnalysisConfig config = load_config(kDefaultConfig);
  return config;
}

AnalysisConfig load_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed config: ") + e.what());
  }
  return parse(doc);
}

AnalysisConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return load_config(text.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string to_json_text(const AnalysisConfig& config) {
  using ordered = nlohmann::ordered_json;
  auto rect = [](const Rect& r) { return ordered{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; };
  ordered doc;
  doc["canvas"] = {{"width", config.layout.canvas_width()}, {"height", config.layout.canvas_height()}};
  doc["game_pane"] = rect(config.layout.game_pane());
  doc["gaze_pane"] = rect(config.layout.gaze_pane());
  doc["scene"] = {{"width", config.roi.scene_width()}, {"height", config.roi.scene_height()}};
  doc["fallback"] = config.roi.fallback();
  ordered regions = ordered::array();
  for (const Region& r : config.roi.regions()) {
    regions.push_back({{"name", r.name},
                       {"x", r.rect.x},
                       {"y", r.rect.y},
                       {"w", r.rect.w},
                       {"h", r.rect.h},
                       {"priority", r.priority}});
  }
  doc["regions"] = regions;
  const MarkerSpec& m = config.marker;
  doc["marker"] = {{"r", {m.r.min, m.r.max}},
                   {"g", {m.g.min, m.g.max}},
                   {"b", {m.b.min, m.b.max}},
                   {"min_blob_area", m.min_blob_area},
                   {"max_blob_area", m.max_blob_area ? ordered(*m.max_blob_area) : ordered(nullptr)}};
  return doc.dump(2) + "\n";
}

}  // namespace gazekit
