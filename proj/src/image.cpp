#include "gazekit/image.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "gazekit/error.hpp"

namespace gazekit {

RgbImage::RgbImage(int width, int height, Rgb fill_color) {
  resize(width, height);
  fill(fill_color);
}

void RgbImage::resize(int width, int height) {
  if (width < 0 || height < 0) throw DataError("negative image dimensions");
  width_ = width;
  height_ = height;
  pixels_.resize(3 * static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
}

void RgbImage::fill(Rgb c) { fill(Rect{0, 0, width_, height_}, c); }

void RgbImage::fill(const Rect& r, Rgb c) {
  for (int y = r.y; y < r.y + r.h; ++y) {
    std::uint8_t* p = row(y) + 3 * static_cast<std::size_t>(r.x);
    if (c.r == c.g && c.g == c.b) {
      std::memset(p, c.r, 3 * static_cast<std::size_t>(r.w));
      continue;
    }
    for (int x = 0; x < r.w; ++x, p += 3) {
      p[0] = c.r;
      p[1] = c.g;
      p[2] = c.b;
    }
  }
}

RgbImage RgbImage::copy_of(const ImageView& v) {
  RgbImage out;
  out.resize(v.width(), v.height());
  out.blit(v, 0, 0);
  return out;
}

void RgbImage::blit(const ImageView& src, int x, int y) {
  const std::size_t row_bytes = 3 * static_cast<std::size_t>(src.width());
  for (int sy = 0; sy < src.height(); ++sy) {
    std::memcpy(row(y + sy) + 3 * static_cast<std::size_t>(x), src.row(sy), row_bytes);
  }
}

namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

// Skips whitespace and '#' comments between PPM header tokens.
int read_ppm_int(std::istream& in, const std::filesystem::path& path) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int value = -1;
  if (!(in >> value) || value < 0) throw DataError("malformed PPM header: " + path.string());
  return value;
}

RgbImage read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image: " + path.string());
  char magic[2] = {};
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || magic[1] != '6') throw DataError("not a binary PPM (P6) file: " + path.string());
  const int width = read_ppm_int(in, path);
  const int height = read_ppm_int(in, path);
  const int maxval = read_ppm_int(in, path);
  if (maxval != 255) throw DataError("only 8-bit PPM is supported: " + path.string());
  in.get();  // single whitespace byte before the raster
  RgbImage image(width, height);
  in.read(reinterpret_cast<char*>(image.data()), static_cast<std::streamsize>(image.byte_size()));
  if (in.gcount() != static_cast<std::streamsize>(image.byte_size())) {
    throw DataError("truncated PPM raster: " + path.string());
  }
  return image;
}

void write_ppm(const std::filesystem::path& path, const ImageView& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write image: " + path.string());
  out << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
  for (int y = 0; y < image.height(); ++y) {
    out.write(reinterpret_cast<const char*>(image.row(y)), 3 * static_cast<std::streamsize>(image.width()));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

RgbImage read_png(const std::filesystem::path& path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    std::string msg = png.message;
    png_image_free(&png);
    throw IoError("cannot read PNG " + path.string() + ": " + msg);
  }
  png.format = PNG_FORMAT_RGB;
  RgbImage image(static_cast<int>(png.width), static_cast<int>(png.height));
  if (!png_image_finish_read(&png, nullptr, image.data(), static_cast<png_int_32>(image.stride()), nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw IoError("cannot decode PNG " + path.string() + ": " + msg);
  }
  return image;
}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};

void write_png(const std::filesystem::path& path, const ImageView& image) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot write image: " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed: " + path.string());
  }
  png_init_io(png, file.get());
  // Frames are large and mostly flat; favour speed over size.
  png_set_compression_level(png, 1);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height(); ++y) {
    png_write_row(png, const_cast<png_bytep>(image.row(y)));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  if (std::fflush(file.get()) != 0) throw IoError("write failed: " + path.string());
}

}  // namespace

bool is_supported_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".png" || ext == ".ppm";
}

RgbImage read_image(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path);
  if (ext == ".ppm") return read_ppm(path);
  throw DataError("unsupported image format: " + path.string());
}

void write_image(const std::filesystem::path& path, const ImageView& image) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return write_png(path, image);
  if (ext == ".ppm") return write_ppm(path, image);
  throw DataError("unsupported image format: " + path.string());
}

}  // namespace gazekit
