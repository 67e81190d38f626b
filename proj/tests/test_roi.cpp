#include <gtest/gtest.h>

#include <set>

#include "gazekit/config.hpp"
#include "gazekit/error.hpp"
#include "gazekit/roi.hpp"
#include "test_support.hpp"

using namespace gazekit;
using gazekit::testing::SplitMix64;

namespace {

std::string config_with_regions(const std::string& regions, int scene_w = 1920) {
  return R"({"scene": {"width": )" + std::to_string(scene_w) + R"(, "height": 1080}, "regions": [)" + regions + "]}";
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(RoiLayout, DefaultHasFiveLabels) {
  auto layout = RoiLayout::valorant_default();
  EXPECT_EQ(layout.regions().size(), 4u);
  EXPECT_EQ(layout.labels(), (std::vector<std::string>{"center", "mini_map", "info1", "info2", "other"}));
  EXPECT_EQ(layout.scene_width(), 1920);
  EXPECT_EQ(layout.scene_height(), 1080);
}

TEST(RoiLayout, ShippedConfigFileMatchesBuiltIn) {
  auto cfg = load_config_file(std::filesystem::path(GAZEKIT_SOURCE_DIR) / "configs" / "valorant_default.json");
  EXPECT_EQ(cfg, default_config());
  EXPECT_EQ(load_roi_layout(gazekit::testing::slurp(std::filesystem::path(GAZEKIT_SOURCE_DIR) / "configs" /
                                                    "valorant_default.json")),
            RoiLayout::valorant_default());
}

TEST(RoiLayout, DuplicateNameIsNamed) {
  auto msg = error_of([] {
    load_roi_layout(config_with_regions(R"({"name": "center", "x": 0, "y": 0, "w": 10, "h": 10, "priority": 1},
                                          {"name": "center", "x": 50, "y": 0, "w": 10, "h": 10, "priority": 2})"));
  });
  EXPECT_NE(msg.find("center"), std::string::npos) << msg;
}

TEST(RoiLayout, DuplicatePriority) {
  auto msg = error_of([] {
    load_roi_layout(config_with_regions(R"({"name": "a", "x": 0, "y": 0, "w": 10, "h": 10, "priority": 1},
                                          {"name": "b", "x": 50, "y": 0, "w": 10, "h": 10, "priority": 1})"));
  });
  EXPECT_NE(msg.find("'b'"), std::string::npos) << msg;
}

TEST(RoiLayout, OutOfBoundsRectIsNamed) {
  auto msg = error_of([] {
    load_roi_layout(config_with_regions(R"({"name": "wide", "x": 1900, "y": 0, "w": 30, "h": 10, "priority": 1})"));
  });
  EXPECT_NE(msg.find("wide"), std::string::npos) << msg;
}

TEST(RoiLayout, MalformedConfig) {
  EXPECT_THROW(load_roi_layout("{not json"), DataError);
  EXPECT_THROW(load_roi_layout(R"({"regions": 3})"), DataError);
  EXPECT_THROW(load_roi_layout(R"({"regoins": []})"), DataError);
  EXPECT_THROW(load_roi_layout(config_with_regions(R"({"name": "Bad Name", "x": 0, "y": 0, "w": 1, "h": 1, "priority": 1})")),
               DataError);
  EXPECT_THROW(load_roi_layout(config_with_regions(R"({"name": "a", "x": 0, "y": 0, "w": 1, "h": 1})")), DataError);
}

TEST(RoiLayout, SceneMustMatchGazePane) {
  EXPECT_THROW(load_config(R"({"scene": {"width": 1280, "height": 720}})"), DataError);
}

TEST(Classify, DefaultExamples) {
  auto layout = RoiLayout::valorant_default();
  EXPECT_EQ(layout.classify(100, 100), "mini_map");
  EXPECT_EQ(layout.classify(960, 540), "center");
  EXPECT_EQ(layout.classify(960, 50), "info1");
  EXPECT_EQ(layout.classify(960, 1000), "info2");
  EXPECT_EQ(layout.classify(1800, 600), "other");
  EXPECT_THROW(layout.classify(1920, 0), DataError);
  EXPECT_THROW(layout.classify(-1, 0), DataError);
}

TEST(Classify, HalfOpenEdges) {
  auto layout = RoiLayout::valorant_default();
  EXPECT_EQ(layout.classify(20, 20), "mini_map");
  EXPECT_EQ(layout.classify(369, 369), "mini_map");
  EXPECT_EQ(layout.classify(370, 100), "other");
  EXPECT_EQ(layout.classify(100, 370), "other");

  RoiLayout adjacent(20, 10, {{"left", {0, 0, 10, 10}, 1}, {"right", {10, 0, 10, 10}, 2}});
  EXPECT_EQ(adjacent.classify(9, 5), "left");
  EXPECT_EQ(adjacent.classify(10, 5), "right");
}

TEST(Classify, OverlapUsesPriority) {
  RoiLayout low_first(100, 100, {{"big", {0, 0, 100, 100}, 1}, {"small", {40, 40, 10, 10}, 5}});
  EXPECT_EQ(low_first.classify(45, 45), "small");
  EXPECT_EQ(low_first.classify(10, 10), "big");
  RoiLayout high_first(100, 100, {{"big", {0, 0, 100, 100}, 9}, {"small", {40, 40, 10, 10}, 5}});
  EXPECT_EQ(high_first.classify(45, 45), "big");
}

TEST(Classify, TotalOverScene) {
  auto layout = RoiLayout::valorant_default();
  auto labels = layout.labels();
  std::set<std::string> allowed(labels.begin(), labels.end());
  SplitMix64 g(3);
  for (int i = 0; i < 20000; ++i) {
    const int x = g.integer(0, 1919), y = g.integer(0, 1079);
    const auto& l = layout.classify(x, y);
    ASSERT_TRUE(allowed.count(l));
    EXPECT_EQ(&l, &layout.classify(x, y));
    // brute force: highest priority containing rect
    std::string expect = layout.fallback();
    int best = std::numeric_limits<int>::min();
    for (const auto& r : layout.regions())
      if (r.rect.contains(x, y) && r.priority > best) best = r.priority, expect = r.name;
    ASSERT_EQ(l, expect) << x << "," << y;
  }
}

TEST(AnnotateTrace, LabelsValidOnly) {
  GazeTrace t;
  t.samples = {{0, 960, 540, true, {}}, {1, 900, 500, true, {}}, {2, 1000, 600, true, {}},
               {3, 0, 0, false, std::string("center")}, {4, 0, 0, false, {}}};
  auto out = annotate_trace(t, RoiLayout::valorant_default());
  ASSERT_EQ(out.samples.size(), 5u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(out.samples[i].roi, "center");
  EXPECT_FALSE(out.samples[3].roi);
  EXPECT_FALSE(out.samples[4].roi);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(out.samples[i].x, t.samples[i].x);
    EXPECT_EQ(out.samples[i].y, t.samples[i].y);
    EXPECT_EQ(out.samples[i].valid, t.samples[i].valid);
    EXPECT_EQ(out.samples[i].frame_id, t.samples[i].frame_id);
  }
}

TEST(AnnotateTrace, DimensionMismatch) {
  GazeTrace t;
  t.scene_width = 1280;
  t.scene_height = 720;
  EXPECT_THROW(annotate_trace(t, RoiLayout::valorant_default()), DataError);
}

TEST(Config, JsonRoundTrip) {
  const auto& d = default_config();
  EXPECT_EQ(load_config(to_json_text(d)), d);
  EXPECT_EQ(to_json_text(load_config(to_json_text(d))), to_json_text(d));
  EXPECT_EQ(load_config("{}"), d);
}

TEST(Config, MarkerOverrides) {
  auto cfg = load_config(R"({"marker": {"r": [200, 255], "g": [0, 50], "b": [0, 50], "min_blob_area": 9,
                                        "max_blob_area": 400}})");
  EXPECT_EQ(cfg.marker.r, (ChannelRange{200, 255}));
  EXPECT_EQ(cfg.marker.min_blob_area, 9);
  EXPECT_EQ(cfg.marker.max_blob_area, 400);
  EXPECT_THROW(load_config(R"({"marker": {"r": [10, 5]}})"), DataError);
  EXPECT_THROW(load_config(R"({"marker": {"r": [0, 300]}})"), DataError);
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_config_file("/nonexistent/gazekit.json"), IoError);
}
