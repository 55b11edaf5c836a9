#pragma once

#include <filesystem>

#include "fringe/patch.hpp"

namespace fringe {

/// Flat little-endian layout: "IPH1", uint32 side, side*side float32 row-major.
InterferogramPatch read_patch(const std::filesystem::path& path);
void write_patch(const std::filesystem::path& path, const InterferogramPatch& patch);

/// Maps gray levels [0, 255] linearly onto [-pi, pi): v = -pi + g * 2pi/256.
/// The image must be square; colour images are converted to gray first.
InterferogramPatch patch_from_image(const std::filesystem::path& image_path);

}  // namespace fringe
