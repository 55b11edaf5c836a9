#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fringe {

/// Writes a side x side map with values in [0, 1] as an 8-bit grayscale PNG
/// (v -> round(255 v), values clamped first).
void write_unit_png(const std::filesystem::path& path, std::span<const double> values, int side);

struct GrayImage {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  ///< row-major
};

/// Reads any image OpenCV understands as 8-bit grayscale.
GrayImage read_gray_image(const std::filesystem::path& path);

}  // namespace fringe
