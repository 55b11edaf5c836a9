#include "fringe/patch.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fringe/error.hpp"

namespace fringe {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool in_phase_range(float v) {
  return v >= static_cast<float>(-kPi) && static_cast<double>(v) < kPi;
}
}  // namespace

int channel_count(ChannelMode mode) {
  return mode == ChannelMode::cyclic ? 3 : 1;
}

double wrap_phase(double v) {
  double r = v - kTwoPi * std::floor((v + kPi) / kTwoPi);
  if (r >= kPi) r -= kTwoPi;
  if (r < -kPi) r += kTwoPi;
  return r;
}

float wrap_phase_float(double v) {
  const auto f = static_cast<float>(wrap_phase(v));
  return in_phase_range(f) ? f : static_cast<float>(-kPi);
}

ChannelStack::ChannelStack(int channels_in, int side_in, float fill)
    : channels(channels_in),
      side(side_in),
      values(static_cast<std::size_t>(channels_in) * side_in * side_in, fill) {}

ChannelStack render_phase(std::span<const float> phase, int side, ChannelMode mode) {
  if (side <= 0 || phase.size() != static_cast<std::size_t>(side) * side) {
    throw ValidationError("phase grid is not " + std::to_string(side) + "x" + std::to_string(side));
  }
  ChannelStack out(channel_count(mode), side);
  const std::size_t plane = out.plane_size();
  for (std::size_t i = 0; i < plane; ++i) {
    const float v = phase[i];
    if (!in_phase_range(v)) {
      throw ValidationError("phase value " + std::to_string(v) + " outside [-pi, pi)");
    }
    const double p = v;
    const auto normalized = static_cast<float>((p + kPi) / kTwoPi);
    if (mode == ChannelMode::cyclic) {
      out.values[i] = static_cast<float>((std::cos(p) + 1.0) * 0.5);
      out.values[plane + i] = static_cast<float>((std::sin(p) + 1.0) * 0.5);
      out.values[2 * plane + i] = normalized;
    } else {
      out.values[i] = normalized;
    }
  }
  return out;
}

InterferogramPatch::InterferogramPatch(int side, std::vector<float> phase, PatchMeta meta)
    : side_(side), phase_(std::move(phase)), meta_(std::move(meta)) {
  if (side_ < kMinSide) {
    throw ValidationError("patch side " + std::to_string(side_) + " below minimum " + std::to_string(kMinSide));
  }
  if (phase_.size() != static_cast<std::size_t>(side_) * side_) {
    throw ValidationError("patch is not square: expected " + std::to_string(side_ * side_) + " values, got " +
                          std::to_string(phase_.size()));
  }
  for (float v : phase_) {
    if (!in_phase_range(v)) {
      throw ValidationError("phase value " + std::to_string(v) + " outside [-pi, pi)");
    }
  }
}

void InterferogramPatch::set_channels(ChannelStack channels) {
  if (channels.side != side_) throw ValidationError("channel side does not match patch side");
  channels_ = std::move(channels);
}

InterferogramPatch render_channels(InterferogramPatch patch, ChannelMode mode) {
  patch.set_channels(render_phase(patch.phase(), patch.side(), mode));
  return patch;
}

Label label_from_int(int v) {
  if (v == 0) return Label::non_deformation;
  if (v == 1) return Label::deformation;
  throw ValidationError("label " + std::to_string(v) + " outside {0, 1}");
}

}  // namespace fringe
