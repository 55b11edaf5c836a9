#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fringe/patch.hpp"
#include "fringe/rng.hpp"

namespace fringe {

/// Transforms in the canonical application order.
enum class TransformKind { hflip, vflip, elastic, blur, multiplicative_noise, gaussian_noise, cutout };

const char* to_string(TransformKind k);
TransformKind transform_from_string(const std::string& name);

struct TransformToggle {
  bool enabled = true;
  double probability = 0.5;
};

/// Stochastic augmentation set. Size-relative parameters left unset resolve
/// against the patch side: cutout hole S/4, elastic alpha S/8, sigma S/4.
struct AugmentationConfig {
  TransformToggle hflip;
  TransformToggle vflip;
  TransformToggle elastic;
  TransformToggle blur;
  TransformToggle multiplicative_noise;
  TransformToggle gaussian_noise;
  TransformToggle cutout;

  std::optional<int> cutout_hole;
  double multiplicative_low = 0.9;
  double multiplicative_high = 1.1;
  double noise_sigma = 0.02;  ///< channel units
  int blur_kernel = 3;
  double blur_sigma_min = 0.1;
  double blur_sigma_max = 1.0;
  std::optional<double> elastic_alpha;  ///< max displacement, pixels
  std::optional<double> elastic_sigma;  ///< smoothing scale, pixels

  /// All transforms disabled.
  static AugmentationConfig identity();

  TransformToggle& toggle(TransformKind k);
  const TransformToggle& toggle(TransformKind k) const;

  int resolved_cutout_hole(int side) const { return cutout_hole.value_or(side / 4); }
  double resolved_elastic_alpha(int side) const { return elastic_alpha.value_or(side / 8.0); }
  double resolved_elastic_sigma(int side) const { return elastic_sigma.value_or(side / 4.0); }

  /// Throws ValidationError if any invariant fails for patches of this side.
  void validate(int side) const;
};

/// One applied transform; together with the origin it replays bit-exactly.
/// `params` holds the drawn scalars, `seed` drives any per-pixel field.
struct AppliedTransform {
  TransformKind kind = TransformKind::hflip;
  std::vector<double> params;
  std::uint64_t seed = 0;

  friend bool operator==(const AppliedTransform&, const AppliedTransform&) = default;
};

using Transcript = std::vector<AppliedTransform>;

struct AugmentedPair {
  ChannelStack view_i;
  ChannelStack view_j;
  std::size_t origin = 0;
  Transcript transcript_i;
  Transcript transcript_j;
};

/// Two independently augmented views of a rendered patch.
/// Throws ValidationError if the patch has no channels.
AugmentedPair make_pair(const InterferogramPatch& patch, const AugmentationConfig& config, Rng& rng,
                        std::size_t origin = 0);

/// Draws one view and its transcript.
ChannelStack augment_view(const ChannelStack& source, const AugmentationConfig& config, Rng& rng,
                          Transcript& transcript);

/// Re-applies a transcript to the origin channels.
ChannelStack replay(const ChannelStack& origin, const Transcript& transcript);

ChannelStack apply_transform(const ChannelStack& in, const AppliedTransform& t);

// Individual transforms. All preserve shape.

ChannelStack hflip(const ChannelStack& in);
ChannelStack vflip(const ChannelStack& in);
ChannelStack cutout(const ChannelStack& in, int row, int col, int hole);
ChannelStack gaussian_blur(const ChannelStack& in, int kernel, double sigma);
ChannelStack multiplicative_noise(const ChannelStack& in, double low, double high, std::uint64_t seed);
ChannelStack gaussian_noise(const ChannelStack& in, double sigma, std::uint64_t seed);

/// Per-pixel displacement in pixels (row and column components).
struct DisplacementField {
  int side = 0;
  std::vector<double> d_row;
  std::vector<double> d_col;
};

/// Uniform(-1, 1) noise per axis, Gaussian-smoothed at scale sigma, rescaled so
/// the largest |component| equals alpha. Throws ValidationError for sigma <= 0 or alpha < 0.
DisplacementField make_displacement_field(int side, double alpha, double sigma, Rng& rng);

/// Bilinear resampling at (row + d_row, col + d_col) with border replication.
ChannelStack remap_bilinear(const ChannelStack& in, const DisplacementField& field);

ChannelStack elastic_transform(const ChannelStack& in, double alpha, double sigma, Rng& rng);

void clamp_unit(ChannelStack& s);

nlohmann::json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const nlohmann::json& j);

}  // namespace fringe
