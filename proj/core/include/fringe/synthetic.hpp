#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fringe/patch.hpp"

namespace fringe {

/// Desk-scale stand-in for physically modelled synthetic interferograms.
/// Deformation patches carry a Gaussian displacement bullseye
/// u(r) = A exp(-r^2 / 2 sigma^2) with A = 2 pi * cycles; every patch carries a
/// random planar ramp and Gaussian phase noise, all wrapped to [-pi, pi).
struct SyntheticFringeSpec {
  std::size_t n_samples = 1;
  int side = 32;
  double deformation_fraction = 0.5;
  double min_cycles = 2.0;
  double max_cycles = 4.0;
  double noise_sigma = 0.3;  ///< radians
  /// Upper bound on the ramp's phase change across the patch, in cycles.
  double ramp_max_cycles = 1.0;
  std::uint64_t seed = 0;

  /// Throws ValidationError if an invariant is broken.
  void validate() const;
};

/// Ground truth used by localization and sequence tests.
struct FringeTruth {
  bool has_bullseye = false;
  double center_row = 0.0;
  double center_col = 0.0;
  double sigma = 0.0;      ///< pixels
  double amplitude = 0.0;  ///< radians
  /// Radius where the remaining displacement drops to half a cycle (pi);
  /// no complete fringe exists outside it.
  double fringe_radius = 0.0;
  double ramp_row = 0.0;  ///< radians per pixel
  double ramp_col = 0.0;
  double ramp_offset = 0.0;

  bool inside_fringe_disk(double row, double col) const;
};

struct SyntheticPatch {
  LabeledPatch labeled;
  FringeTruth truth;
};

/// Nearest integer to fraction * n, ties toward more positives.
std::size_t positive_count(std::size_t n, double fraction);

/// Exactly n_samples patches, positive_count() of them labelled 1, in a
/// seeded random order. Identical specs give bit-identical output.
std::vector<SyntheticPatch> generate_synthetic(const SyntheticFringeSpec& spec);

/// Unwrapped displacement of a bullseye, sampled at pixel centres (row, col).
std::vector<double> bullseye_displacement(int side, double center_row, double center_col, double sigma,
                                          double amplitude);

/// Radius at which A exp(-r^2/2 sigma^2) = pi; 0 when A <= pi.
double fringe_radius(double sigma, double amplitude);

}  // namespace fringe
