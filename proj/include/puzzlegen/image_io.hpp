// Copyright Contributors to the Puzzlegen Project
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "puzzlegen/types.hpp"

namespace puzzlegen {

/// 8-bit RGB PNG. Grayscale/paletted/alpha inputs are expanded to RGB.
Image8 read_png_rgb8(const std::string& path);
void write_png_rgb8(const std::string& path, const Image8& image);

/// 16-bit single-channel PNG (the millimeter-depth convention).
std::vector<uint16_t> read_png_gray16(const std::string& path, int& width, int& height);
void write_png_gray16(const std::string& path, int width, int height, const uint16_t* values);

/// 1-bit grayscale PNG; in memory one byte per pixel, nonzero = set.
std::vector<uint8_t> read_png_mask(const std::string& path, int& width, int& height);
void write_png_mask(const std::string& path, int width, int height, const uint8_t* values);

}  // namespace puzzlegen
