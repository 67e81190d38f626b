#include "gazekit/detect.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <thread>

#include "gazekit/error.hpp"

namespace gazekit {

void MarkerSpec::validate() const {
  auto check = [](const ChannelRange& c, const char* name) {
    if (c.min > c.max) throw DataError(std::string("marker ") + name + " range has min > max");
  };
  check(r, "red");
  check(g, "green");
  check(b, "blue");
  if (min_blob_area < 1) throw DataError("marker min_blob_area must be >= 1");
  if (max_blob_area && *max_blob_area < min_blob_area) {
    throw DataError("marker max_blob_area is below min_blob_area");
  }
}

PixelPoint Blob::centroid() const noexcept {
  // floor(sum/area + 1/2) in exact integer arithmetic: floor((2*sum + area) / (2*area)).
  auto round_half_up = [this](std::int64_t sum) {
    const std::int64_t num = 2 * sum + area;
    const std::int64_t den = 2 * area;
    return static_cast<int>(num >= 0 ? num / den : -((-num + den - 1) / den));
  };
  return {round_half_up(sum_x), round_half_up(sum_y)};
}

namespace {

struct Run {
  int y;
  int x0;
  int x1;  // exclusive
};

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

}  // namespace

std::vector<Blob> marker_blobs(const ImageView& pane, const MarkerSpec& spec) {
  // Run-length labelling: collect horizontal runs of marker pixels, then join
  // runs on adjacent rows that share at least one column.
  std::vector<Run> runs;
  std::vector<std::size_t> row_begin(static_cast<std::size_t>(pane.height()) + 1, 0);
  for (int y = 0; y < pane.height(); ++y) {
    row_begin[static_cast<std::size_t>(y)] = runs.size();
    const std::uint8_t* p = pane.row(y);
    int x = 0;
    while (x < pane.width()) {
      if (!spec.matches(p[3 * x], p[3 * x + 1], p[3 * x + 2])) {
        ++x;
        continue;
      }
      const int start = x;
      while (x < pane.width() && spec.matches(p[3 * x], p[3 * x + 1], p[3 * x + 2])) ++x;
      runs.push_back({y, start, x});
    }
  }
  row_begin[static_cast<std::size_t>(pane.height())] = runs.size();
  if (runs.empty()) return {};

  std::vector<std::size_t> parent(runs.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (int y = 1; y < pane.height(); ++y) {
    std::size_t a = row_begin[static_cast<std::size_t>(y - 1)];
    const std::size_t a_end = row_begin[static_cast<std::size_t>(y)];
    std::size_t b = a_end;
    const std::size_t b_end = row_begin[static_cast<std::size_t>(y) + 1];
    while (a < a_end && b < b_end) {
      if (runs[a].x0 < runs[b].x1 && runs[b].x0 < runs[a].x1) {
        const std::size_t ra = find_root(parent, a);
        const std::size_t rb = find_root(parent, b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
      if (runs[a].x1 < runs[b].x1) {
        ++a;
      } else {
        ++b;
      }
    }
  }

  // Roots are always the smallest run index of their component, and runs are
  // in raster order, so a root's run holds the component's first pixel.
  std::vector<Blob> blobs;
  std::vector<std::size_t> blob_of(runs.size(), 0);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::size_t root = find_root(parent, i);
    if (root == i) {
      blob_of[i] = blobs.size();
      blobs.push_back(Blob{0, 0, 0, {runs[i].x0, runs[i].y}});
    }
    Blob& blob = blobs[blob_of[root]];
    const Run& r = runs[i];
    const std::int64_t len = r.x1 - r.x0;
    blob.area += len;
    blob.sum_x += len * (static_cast<std::int64_t>(r.x0) + r.x1 - 1) / 2;
    blob.sum_y += len * r.y;
  }
  return blobs;
}

std::optional<PixelPoint> detect_marker(const ImageView& pane, const MarkerSpec& spec) {
  const Blob* best = nullptr;
  const auto blobs = marker_blobs(pane, spec);
  for (const Blob& blob : blobs) {
    if (blob.area < spec.min_blob_area) continue;
    if (spec.max_blob_area && blob.area > *spec.max_blob_area) continue;
    // Blobs arrive in first-pixel order, so strict '>' keeps the earliest on ties.
    if (!best || blob.area > best->area) best = &blob;
  }
  if (!best) return std::nullopt;
  return best->centroid();
}

namespace {

GazeSample sample_for(std::size_t index, const ImageView& frame, const RecordingLayout& layout,
                      const MarkerSpec& spec) {
  GazeSample s;
  s.frame_id = index;
  if (auto p = detect_marker(frame.crop(layout.gaze_pane()), spec)) {
    s.x = p->x;
    s.y = p->y;
    s.valid = true;
  }
  return s;
}

void check_frame(const ImageView& frame, const RecordingLayout& layout) {
  if (frame.width() != layout.canvas_width() || frame.height() != layout.canvas_height()) {
    throw DataError("frame is " + std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                    ", layout canvas is " + std::to_string(layout.canvas_width()) + "x" +
                    std::to_string(layout.canvas_height()));
  }
}

}  // namespace

GazeTrace extract_trace(FrameSource& source, const RecordingLayout& layout, const MarkerSpec& spec,
                        const TraceMetadata& meta, const ExtractOptions& options) {
  spec.validate();
  if (source.width() != layout.canvas_width() || source.height() != layout.canvas_height()) {
    throw DataError("source frames are " + std::to_string(source.width()) + "x" + std::to_string(source.height()) +
                    ", layout canvas is " + std::to_string(layout.canvas_width()) + "x" +
                    std::to_string(layout.canvas_height()));
  }
  if (layout.game_pane().w != layout.gaze_pane().w) throw DataError("game pane and gaze pane widths differ");

  GazeTrace trace;
  trace.scene_width = layout.gaze_pane().w;
  trace.scene_height = layout.gaze_pane().h;
  trace.meta = meta;
  if (auto n = source.frame_count()) trace.samples.reserve(*n);

  const unsigned threads = std::max(1U, options.threads);
  if (threads == 1) {
    RgbImage frame;
    while (auto index = source.next(frame)) {
      check_frame(frame, layout);
      trace.samples.push_back(sample_for(*index, frame, layout, spec));
    }
    return trace;
  }

  // Pull a batch sequentially, detect in parallel, append in frame order.
  const std::size_t batch_size = 4 * static_cast<std::size_t>(threads);
  std::vector<RgbImage> frames(batch_size);
  std::vector<std::size_t> indices(batch_size);
  std::vector<GazeSample> out(batch_size);
  for (;;) {
    std::size_t filled = 0;
    while (filled < batch_size) {
      auto index = source.next(frames[filled]);
      if (!index) break;
      check_frame(frames[filled], layout);
      indices[filled++] = *index;
    }
    if (filled == 0) break;
    {
      std::vector<std::jthread> workers;
      for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
          for (std::size_t i = t; i < filled; i += threads) out[i] = sample_for(indices[i], frames[i], layout, spec);
        });
      }
    }
    trace.samples.insert(trace.samples.end(), out.begin(), out.begin() + static_cast<std::ptrdiff_t>(filled));
    if (filled < batch_size) break;
  }
  return trace;
}

}  // namespace gazekit
