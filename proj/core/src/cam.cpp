#include "fringe/cam.hpp"

#include <algorithm>
#include <cmath>

#include "fringe/error.hpp"
#include "fringe/image_io.hpp"

namespace fringe {

std::vector<double> upsample_bilinear(std::span<const double> plane, int side, int out_side) {
  if (side <= 0 || out_side <= 0 || plane.size() != static_cast<std::size_t>(side) * side) {
    throw ValidationError("upsample_bilinear: bad plane size");
  }
  std::vector<double> out(static_cast<std::size_t>(out_side) * out_side);
  const double scale = static_cast<double>(side) / out_side;
  const auto src = [&](int r, int c) { return plane[static_cast<std::size_t>(r) * side + c]; };
  for (int r = 0; r < out_side; ++r) {
    const double y = std::clamp((r + 0.5) * scale - 0.5, 0.0, side - 1.0);
    const int y0 = static_cast<int>(std::floor(y));
    const int y1 = std::min(y0 + 1, side - 1);
    const double fy = y - y0;
    for (int c = 0; c < out_side; ++c) {
      const double x = std::clamp((c + 0.5) * scale - 0.5, 0.0, side - 1.0);
      const int x0 = static_cast<int>(std::floor(x));
      const int x1 = std::min(x0 + 1, side - 1);
      const double fx = x - x0;
      out[static_cast<std::size_t>(r) * out_side + c] = (1 - fy) * ((1 - fx) * src(y0, x0) + fx * src(y0, x1)) +
                                                         fy * ((1 - fx) * src(y1, x0) + fx * src(y1, x1));
    }
  }
  return out;
}

std::vector<double> class_activation_map(const Tensor& maps, std::span<const double> weights, int out_side) {
  if (maps.rank() != 3 || maps.dim(1) != maps.dim(2)) throw ValidationError("CAM expects K x s x s feature maps");
  const int k = maps.dim(0), s = maps.dim(1);
  if (weights.size() != static_cast<std::size_t>(k)) throw ValidationError("CAM weight count must equal K");
  const std::size_t plane = static_cast<std::size_t>(s) * s;
  std::vector<double> sum(plane, 0.0);
  for (int ch = 0; ch < k; ++ch) {
    const double* f = maps.data() + ch * plane;
    for (std::size_t i = 0; i < plane; ++i) sum[i] += weights[ch] * f[i];
  }
  for (double& v : sum) v = std::max(v, 0.0);
  std::vector<double> out = upsample_bilinear(sum, s, out_side);
  const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
  const double min = *lo, range = *hi - *lo;
  for (double& v : out) v = range > 0.0 ? (v - min) / range : 0.0;
  return out;
}

CamResult compute_cam(EncoderModel& model, const InterferogramPatch& patch, int class_index) {
  if (class_index < -1 || class_index > 1) throw ValidationError("CAM class must be 0 or 1 (or -1 for predicted)");
  const InterferogramPatch* ptr = &patch;
  const Tensor batch = make_batch(std::span<const InterferogramPatch* const>(&ptr, 1));
  const Tensor maps = model.feature_maps(batch, Mode::eval);
  const int k = maps.dim(1), s = maps.dim(2);

  // Logits from the same maps: pooling then the classifier.
  Tensor h({1, k});
  const std::size_t plane = static_cast<std::size_t>(s) * maps.dim(3);
  for (int ch = 0; ch < k; ++ch) {
    double acc = 0.0;
    for (std::size_t i = 0; i < plane; ++i) acc += maps[ch * plane + i];
    h[static_cast<std::size_t>(ch)] = acc / static_cast<double>(plane);
  }
  const Tensor logits = classify(model.classifier(), h);

  CamResult out;
  out.negative_logit = logits[0];
  out.positive_logit = logits[1];
  out.predicted = predict_label(logits[0], logits[1]);
  out.class_index = class_index < 0 ? out.predicted : class_index;
  out.side = patch.side();

  const Parameter& w = model.classifier().linear().weight();
  const std::span<const double> row(w.value.data() + static_cast<std::size_t>(out.class_index) * k,
                                    static_cast<std::size_t>(k));
  out.map = class_activation_map(maps.reshaped({k, s, maps.dim(3)}), row, out.side);
  const auto best = std::max_element(out.map.begin(), out.map.end()) - out.map.begin();
  out.argmax_row = static_cast<int>(best / out.side);
  out.argmax_col = static_cast<int>(best % out.side);
  return out;
}

std::string cam_filename(const std::string& sample_id, int class_index) {
  return sample_id + "_cam_" + std::to_string(class_index) + ".png";
}

void write_cam(const std::filesystem::path& dir, const std::string& sample_id, const CamResult& cam) {
  write_unit_png(dir / cam_filename(sample_id, cam.class_index), cam.map, cam.side);
}

}  // namespace fringe
