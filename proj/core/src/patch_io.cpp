#include "fringe/patch_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "fringe/error.hpp"

namespace fringe {

namespace {

constexpr std::array<char, 4> kMagic = {'I', 'P', 'H', '1'};
constexpr std::uint32_t kMaxSide = 1u << 15;

static_assert(std::endian::native == std::endian::little, "patch files are little-endian");

}  // namespace

InterferogramPatch read_patch(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open patch " + path.string());
  std::array<char, 4> magic{};
  std::uint32_t side = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&side), sizeof side);
  if (!in) throw ValidationError(path.string() + ": truncated patch header");
  if (magic != kMagic) throw ValidationError(path.string() + ": bad magic, expected IPH1");
  if (side == 0 || side > kMaxSide) throw ValidationError(path.string() + ": implausible side " + std::to_string(side));

  std::vector<float> values(static_cast<std::size_t>(side) * side);
  in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(float)));
  if (!in) throw ValidationError(path.string() + ": truncated patch payload");
  if (in.peek() != std::char_traits<char>::eof()) throw ValidationError(path.string() + ": trailing bytes");

  PatchMeta meta;
  meta.source_id = path.stem().string();
  return InterferogramPatch(static_cast<int>(side), std::move(values), std::move(meta));
}

void write_patch(const std::filesystem::path& path, const InterferogramPatch& patch) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write patch " + path.string());
  const auto side = static_cast<std::uint32_t>(patch.side());
  out.write(kMagic.data(), kMagic.size());
  out.write(reinterpret_cast<const char*>(&side), sizeof side);
  const auto phase = patch.phase();
  out.write(reinterpret_cast<const char*>(phase.data()), static_cast<std::streamsize>(phase.size_bytes()));
  if (!out) throw IoError("failed writing patch " + path.string());
}

InterferogramPatch patch_from_image(const std::filesystem::path& image_path) {
  if (!std::filesystem::exists(image_path)) throw IoError("no such image " + image_path.string());
  cv::Mat img = cv::imread(image_path.string(), cv::IMREAD_GRAYSCALE);
  if (img.empty()) throw ValidationError("unsupported or corrupt image " + image_path.string());
  if (img.rows != img.cols) {
    throw ValidationError("image " + image_path.string() + " is not square (" + std::to_string(img.cols) + "x" +
                          std::to_string(img.rows) + ")");
  }
  const int side = img.rows;
  std::vector<float> phase(static_cast<std::size_t>(side) * side);
  constexpr double step = 2.0 * std::numbers::pi / 256.0;
  for (int r = 0; r < side; ++r) {
    const auto* row = img.ptr<std::uint8_t>(r);
    for (int c = 0; c < side; ++c) {
      phase[static_cast<std::size_t>(r) * side + c] = static_cast<float>(-std::numbers::pi + row[c] * step);
    }
  }
  PatchMeta meta;
  meta.source_id = image_path.stem().string();
  return InterferogramPatch(side, std::move(phase), std::move(meta));
}

}  // namespace fringe
