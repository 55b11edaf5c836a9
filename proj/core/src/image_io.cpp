#include "fringe/image_io.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>

#include "fringe/error.hpp"

namespace fringe {

void write_unit_png(const std::filesystem::path& path, std::span<const double> values, int side) {
  if (side <= 0 || values.size() != static_cast<std::size_t>(side) * static_cast<std::size_t>(side)) {
    throw ValidationError("write_unit_png: expected side x side values");
  }
  cv::Mat img(side, side, CV_8UC1);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const double v = std::clamp(values[static_cast<std::size_t>(r * side + c)], 0.0, 1.0);
      img.at<std::uint8_t>(r, c) = static_cast<std::uint8_t>(std::lround(255.0 * v));
    }
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), img);
  } catch (const cv::Exception&) {
    ok = false;
  }
  if (!ok) throw IoError("cannot write image " + path.string());
}

GrayImage read_gray_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("image not found: " + path.string());
  const cv::Mat img = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
  if (img.empty()) throw IoError("cannot decode image " + path.string());
  GrayImage out;
  out.rows = img.rows;
  out.cols = img.cols;
  out.pixels.resize(static_cast<std::size_t>(img.rows) * static_cast<std::size_t>(img.cols));
  for (int r = 0; r < img.rows; ++r) {
    std::copy_n(img.ptr<std::uint8_t>(r), img.cols, out.pixels.data() + static_cast<std::size_t>(r) * img.cols);
  }
  return out;
}

}  // namespace fringe
