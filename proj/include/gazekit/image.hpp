#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace gazekit {

/// Axis-aligned pixel rectangle, half-open: covers [x, x+w) × [y, y+h).
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool contains(int px, int py) const noexcept {
    return px >= x && px < x + w && py >= y && py < y + h;
  }
  bool inside(int width, int height) const noexcept {
    return x >= 0 && y >= 0 && w >= 0 && h >= 0 && x + w <= width && y + h <= height;
  }
  bool overlaps(const Rect& o) const noexcept {
    return x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }
  long long area() const noexcept { return static_cast<long long>(w) * h; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Read-only window into packed RGB24 pixels. Rows may be strided so that a
/// view can address a sub-rectangle of a larger image without copying.
class ImageView {
 public:
  ImageView() = default;
  ImageView(const std::uint8_t* data, int width, int height, std::size_t stride)
      : data_(data), width_(width), height_(height), stride_(stride) {}

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t stride() const noexcept { return stride_; }
  bool empty() const noexcept { return width_ <= 0 || height_ <= 0; }

  const std::uint8_t* row(int y) const noexcept { return data_ + static_cast<std::size_t>(y) * stride_; }
  Rgb at(int x, int y) const noexcept {
    const std::uint8_t* p = row(y) + 3 * static_cast<std::size_t>(x);
    return {p[0], p[1], p[2]};
  }

  /// Sub-view; the rectangle must lie inside this view.
  ImageView crop(const Rect& r) const noexcept {
    return {row(r.y) + 3 * static_cast<std::size_t>(r.x), r.w, r.h, stride_};
  }

 private:
  const std::uint8_t* data_ = nullptr;
  int width_ = 0;
  int height_ = 0;
  std::size_t stride_ = 0;
};

/// Owning, tightly packed RGB24 image.
class RgbImage {
 public:
  RgbImage() = default;
  RgbImage(int width, int height, Rgb fill = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t stride() const noexcept { return 3 * static_cast<std::size_t>(width_); }
  std::size_t byte_size() const noexcept { return pixels_.size(); }

  std::uint8_t* data() noexcept { return pixels_.data(); }
  const std::uint8_t* data() const noexcept { return pixels_.data(); }
  std::span<std::uint8_t> bytes() noexcept { return pixels_; }
  std::span<const std::uint8_t> bytes() const noexcept { return pixels_; }

  std::uint8_t* row(int y) noexcept { return pixels_.data() + static_cast<std::size_t>(y) * stride(); }
  const std::uint8_t* row(int y) const noexcept { return pixels_.data() + static_cast<std::size_t>(y) * stride(); }

  Rgb at(int x, int y) const noexcept { return view().at(x, y); }
  void set(int x, int y, Rgb c) noexcept {
    std::uint8_t* p = row(y) + 3 * static_cast<std::size_t>(x);
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  /// Reshape, reusing the allocation when possible. Contents are unspecified.
  void resize(int width, int height);
  void fill(Rgb c);
  void fill(const Rect& r, Rgb c);

  ImageView view() const noexcept { return {pixels_.data(), width_, height_, stride()}; }
  operator ImageView() const noexcept { return view(); }

  static RgbImage copy_of(const ImageView& v);

  /// Copy `src` into this image with its top-left corner at (x, y).
  void blit(const ImageView& src, int x, int y);

  friend bool operator==(const RgbImage&, const RgbImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// Lossless raster file I/O. PNG goes through libpng; binary PPM (P6) is
// handled directly. The format is chosen from the file extension.

bool is_supported_image(const std::filesystem::path& path);
RgbImage read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const ImageView& image);

}  // namespace gazekit
