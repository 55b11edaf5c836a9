#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fringe/model.hpp"

namespace fringe {

/// Class activation map of one sample: sum_k w_k F_k over the K x s x s final
/// feature maps, ReLU, bilinear upsampling to out_side (pixel-centre aligned,
/// edge-clamped), then min-max normalisation to [0, 1]. A constant map
/// normalises to all zeros.
std::vector<double> class_activation_map(const Tensor& maps, std::span<const double> weights, int out_side);

/// Bilinear resize of a side x side plane to out_side x out_side.
std::vector<double> upsample_bilinear(std::span<const double> plane, int side, int out_side);

struct CamResult {
  int class_index = 0;
  int predicted = 0;
  double negative_logit = 0.0;
  double positive_logit = 0.0;
  int side = 0;
  std::vector<double> map;  ///< side x side, row-major, in [0, 1]
  int argmax_row = 0;
  int argmax_col = 0;
};

/// CAM for class_index in {0, 1}, or for the predicted class when class_index is -1.
/// Throws ValidationError for other class indices or an unrendered patch.
CamResult compute_cam(EncoderModel& model, const InterferogramPatch& patch, int class_index = -1);

/// "<sample_id>_cam_<class>.png"
std::string cam_filename(const std::string& sample_id, int class_index);

void write_cam(const std::filesystem::path& dir, const std::string& sample_id, const CamResult& cam);

}  // namespace fringe
