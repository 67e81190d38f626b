#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "gazekit/image.hpp"

namespace gazekit {

/// Placement of the game scene and the gaze-overlay pane on the recorded
/// canvas. The default is a 1920×2160 canvas with the game in the top half and
/// the overlay in the bottom half.
class RecordingLayout {
 public:
  RecordingLayout();
  /// Throws DataError when a pane leaves the canvas, the panes overlap or the
  /// pane widths differ.
  RecordingLayout(int canvas_width, int canvas_height, Rect game_pane, Rect gaze_pane);

  int canvas_width() const noexcept { return canvas_width_; }
  int canvas_height() const noexcept { return canvas_height_; }
  const Rect& game_pane() const noexcept { return game_pane_; }
  const Rect& gaze_pane() const noexcept { return gaze_pane_; }

  friend bool operator==(const RecordingLayout&, const RecordingLayout&) = default;

 private:
  int canvas_width_;
  int canvas_height_;
  Rect game_pane_;
  Rect gaze_pane_;
};

/// Sequential, single-consumer supplier of RGB frames of a fixed size.
class FrameSource {
 public:
  virtual ~FrameSource() = default;

  virtual int width() const noexcept = 0;
  virtual int height() const noexcept = 0;
  virtual std::optional<double> frame_rate_hint() const { return std::nullopt; }
  /// Total frame count when known up front (image directories), otherwise empty.
  virtual std::optional<std::size_t> frame_count() const { return std::nullopt; }

  /// Decode the next frame into `buffer` (its allocation is reused) and return
  /// its index, or nothing at end of input. Indices run 0, 1, 2, ...
  virtual std::optional<std::size_t> next(RgbImage& buffer) = 0;

  std::size_t frames_yielded() const noexcept { return yielded_; }

 protected:
  std::size_t advance() noexcept { return yielded_++; }

 private:
  std::size_t yielded_ = 0;
};

/// Frames from a directory of PNG/PPM files, taken in lexicographic filename
/// order. Files with other extensions and dot-files are ignored.
class ImageDirSource final : public FrameSource {
 public:
  ImageDirSource(const std::filesystem::path& dir, int width, int height);

  int width() const noexcept override { return width_; }
  int height() const noexcept override { return height_; }
  std::optional<std::size_t> frame_count() const override { return files_.size(); }
  std::optional<std::size_t> next(RgbImage& buffer) override;

  const std::vector<std::filesystem::path>& files() const noexcept { return files_; }

 private:
  std::vector<std::filesystem::path> files_;
  int width_;
  int height_;
};

/// Packed RGB24 frames concatenated on a byte stream (e.g. a decoder's
/// rawvideo output piped to stdin). A trailing partial frame is an error.
class RawStreamSource final : public FrameSource {
 public:
  RawStreamSource(std::istream& stream, int width, int height, std::optional<double> frame_rate = {});

  int width() const noexcept override { return width_; }
  int height() const noexcept override { return height_; }
  std::optional<double> frame_rate_hint() const override { return rate_; }
  std::optional<std::size_t> next(RgbImage& buffer) override;

 private:
  std::istream* stream_;
  int width_;
  int height_;
  std::optional<double> rate_;
};

std::unique_ptr<FrameSource> open_image_dir(const std::filesystem::path& dir, int width, int height);
std::unique_ptr<FrameSource> open_raw_stream(std::istream& stream, int width, int height);

/// Copy out the game pane and the gaze pane of one canvas frame.
std::pair<RgbImage, RgbImage> split_panes(const ImageView& frame, const RecordingLayout& layout);

}  // namespace gazekit
