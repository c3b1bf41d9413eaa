// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0

#include "puzzlegen/image_io.hpp"

#include <cstdio>
#include <memory>

#include <png.h>

namespace puzzlegen {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

void open_read(PngReader& r, std::FILE* f, const std::string& path) {
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) throw IoError("libpng init failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) throw IoError("libpng init failed");
  if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode PNG: " + path);
  png_init_io(r.png, f);
  png_read_info(r.png, r.info);
}

}  // namespace

Image8 read_png_rgb8(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open image: " + path);
  PngReader r;
  open_read(r, f.get(), path);
  if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode PNG: " + path);

  png_set_expand(r.png);
  png_set_strip_alpha(r.png);
  png_set_strip_16(r.png);
  png_set_gray_to_rgb(r.png);
  png_read_update_info(r.png, r.info);

  const int width = png_get_image_width(r.png, r.info);
  const int height = png_get_image_height(r.png, r.info);
  if (png_get_channels(r.png, r.info) != 3 || png_get_bit_depth(r.png, r.info) != 8) {
    throw IoError("unsupported PNG layout for RGB read: " + path);
  }
  Image8 img(width, height, 3);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) rows[y] = img.data.data() + static_cast<size_t>(y) * width * 3;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return img;
}

void write_png_rgb8(const std::string& path, const Image8& image) {
  if (image.channels != 3) throw IoError("write_png_rgb8: expected 3 channels");
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot write image: " + path);
  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!w.png) throw IoError("libpng init failed");
  w.info = png_create_info_struct(w.png);
  if (!w.info) throw IoError("libpng init failed");
  if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to encode PNG: " + path);
  png_init_io(w.png, f.get());
  png_set_IHDR(w.png, w.info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  for (int y = 0; y < image.height; ++y) {
    png_write_row(w.png, const_cast<png_bytep>(image.data.data() +
                                               static_cast<size_t>(y) * image.width * 3));
  }
  png_write_end(w.png, nullptr);
}

std::vector<uint16_t> read_png_gray16(const std::string& path, int& width, int& height) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open image: " + path);
  PngReader r;
  open_read(r, f.get(), path);
  if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode PNG: " + path);

  if (png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_GRAY ||
      png_get_bit_depth(r.png, r.info) != 16) {
    throw IoError("expected 16-bit grayscale PNG: " + path);
  }
  png_set_swap(r.png);  // PNG stores big-endian samples
  png_read_update_info(r.png, r.info);
  width = png_get_image_width(r.png, r.info);
  height = png_get_image_height(r.png, r.info);
  std::vector<uint16_t> values(static_cast<size_t>(width) * height);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = reinterpret_cast<png_bytep>(values.data() + static_cast<size_t>(y) * width);
  }
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return values;
}

void write_png_gray16(const std::string& path, int width, int height, const uint16_t* values) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot write image: " + path);
  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!w.png) throw IoError("libpng init failed");
  w.info = png_create_info_struct(w.png);
  if (!w.info) throw IoError("libpng init failed");
  if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to encode PNG: " + path);
  png_init_io(w.png, f.get());
  png_set_IHDR(w.png, w.info, width, height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  png_set_swap(w.png);
  for (int y = 0; y < height; ++y) {
    png_write_row(w.png, reinterpret_cast<png_const_bytep>(values + static_cast<size_t>(y) * width));
  }
  png_write_end(w.png, nullptr);
}

std::vector<uint8_t> read_png_mask(const std::string& path, int& width, int& height) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw IoError("cannot open image: " + path);
  PngReader r;
  open_read(r, f.get(), path);
  if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode PNG: " + path);

  if (png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_GRAY) {
    throw IoError("expected grayscale mask PNG: " + path);
  }
  png_set_expand_gray_1_2_4_to_8(r.png);
  png_read_update_info(r.png, r.info);
  width = png_get_image_width(r.png, r.info);
  height = png_get_image_height(r.png, r.info);
  std::vector<uint8_t> bytes(static_cast<size_t>(width) * height);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) rows[y] = bytes.data() + static_cast<size_t>(y) * width;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  for (auto& b : bytes) b = b ? 1 : 0;
  return bytes;
}

void write_png_mask(const std::string& path, int width, int height, const uint8_t* values) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw IoError("cannot write image: " + path);
  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!w.png) throw IoError("libpng init failed");
  w.info = png_create_info_struct(w.png);
  if (!w.info) throw IoError("libpng init failed");
  if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to encode PNG: " + path);
  png_init_io(w.png, f.get());
  png_set_IHDR(w.png, w.info, width, height, 1, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  const int stride = (width + 7) / 8;
  std::vector<uint8_t> row(stride);
  for (int y = 0; y < height; ++y) {
    std::fill(row.begin(), row.end(), 0);
    for (int x = 0; x < width; ++x) {
      if (values[static_cast<size_t>(y) * width + x]) row[x / 8] |= 0x80 >> (x % 8);
    }
    png_write_row(w.png, row.data());
  }
  png_write_end(w.png, nullptr);
}

}  // namespace puzzlegen
