#include "gazekit/ingest.hpp"

#include <algorithm>
#include <string>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

std::string rect_str(const Rect& r) {
  return "(" + std::to_string(r.x) + "," + std::to_string(r.y) + "," + std::to_string(r.w) + "," +
         std::to_string(r.h) + ")";
}

void check_dims(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw DataError("frame dimensions must be positive, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
}

}  // namespace

RecordingLayout::RecordingLayout()
    : RecordingLayout(1920, 2160, Rect{0, 0, 1920, 1080}, Rect{0, 1080, 1920, 1080}) {}

RecordingLayout::RecordingLayout(int canvas_width, int canvas_height, Rect game_pane, Rect gaze_pane)
    : canvas_width_(canvas_width), canvas_height_(canvas_height), game_pane_(game_pane), gaze_pane_(gaze_pane) {
  check_dims(canvas_width, canvas_height);
  if (game_pane.w <= 0 || game_pane.h <= 0) throw DataError("game pane is empty: " + rect_str(game_pane));
  if (gaze_pane.w <= 0 || gaze_pane.h <= 0) throw DataError("gaze pane is empty: " + rect_str(gaze_pane));
  if (!game_pane.inside(canvas_width, canvas_height)) {
    throw DataError("game pane " + rect_str(game_pane) + " leaves the canvas");
  }
  if (!gaze_pane.inside(canvas_width, canvas_height)) {
    throw DataError("gaze pane " + rect_str(gaze_pane) + " leaves the canvas");
  }
  if (game_pane.overlaps(gaze_pane)) {
    throw DataError("game pane " + rect_str(game_pane) + " overlaps gaze pane " + rect_str(gaze_pane));
  }
  if (game_pane.w != gaze_pane.w) throw DataError("game pane and gaze pane widths differ");
}

ImageDirSource::ImageDirSource(const std::filesystem::path& dir, int width, int height)
    : width_(width), height_(height) {
  check_dims(width, height);
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("frame directory not found: " + dir.string());
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto& p = entry.path();
    if (!entry.is_regular_file() || p.filename().string().starts_with('.') || !is_supported_image(p)) continue;
    files_.push_back(p);
  }
  if (ec) throw IoError("cannot list frame directory " + dir.string() + ": " + ec.message());
  std::sort(files_.begin(), files_.end(),
            [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
}

std::optional<std::size_t> ImageDirSource::next(RgbImage& buffer) {
  if (frames_yielded() >= files_.size()) return std::nullopt;
  const auto& path = files_[frames_yielded()];
  buffer = read_image(path);
  if (buffer.width() != width_ || buffer.height() != height_) {
    throw DataError("frame " + path.filename().string() + " is " + std::to_string(buffer.width()) + "x" +
                    std::to_string(buffer.height()) + ", expected " + std::to_string(width_) + "x" +
                    std::to_string(height_));
  }
  return advance();
}

RawStreamSource::RawStreamSource(std::istream& stream, int width, int height, std::optional<double> frame_rate)
    : stream_(&stream), width_(width), height_(height), rate_(frame_rate) {
  check_dims(width, height);
}

std::optional<std::size_t> RawStreamSource::next(RgbImage& buffer) {
  buffer.resize(width_, height_);
  const auto want = static_cast<std::streamsize>(buffer.byte_size());
  stream_->read(reinterpret_cast<char*>(buffer.data()), want);
  const std::streamsize got = stream_->gcount();
  if (got == 0) return std::nullopt;
  if (got != want) {
    throw DataError("raw stream truncated: " + std::to_string(got) + " of " + std::to_string(want) +
                    " bytes in frame " + std::to_string(frames_yielded()));
  }
  return advance();
}

std::unique_ptr<FrameSource> open_image_dir(const std::filesystem::path& dir, int width, int height) {
  return std::make_unique<ImageDirSource>(dir, width, height);
}

std::unique_ptr<FrameSource> open_raw_stream(std::istream& stream, int width, int height) {
  return std::make_unique<RawStreamSource>(stream, width, height);
}

std::pair<RgbImage, RgbImage> split_panes(const ImageView& frame, const RecordingLayout& layout) {
  if (frame.width() != layout.canvas_width() || frame.height() != layout.canvas_height()) {
    throw DataError("frame is " + std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                    ", layout canvas is " + std::to_string(layout.canvas_width()) + "x" +
                    std::to_string(layout.canvas_height()));
  }
  return {RgbImage::copy_of(frame.crop(layout.game_pane())), RgbImage::copy_of(frame.crop(layout.gaze_pane()))};
}

}  // namespace gazekit
