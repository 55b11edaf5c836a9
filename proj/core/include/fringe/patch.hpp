#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fringe {

enum class Geometry { ascending, descending, unknown };
enum class Filtering { goldstein, unfiltered, unknown };
enum class Overlay { phase_only, amplitude_overlay, unknown };

struct PatchMeta {
  std::string source_id;
  Geometry geometry = Geometry::unknown;
  Filtering filtered = Filtering::unknown;
  Overlay overlay = Overlay::unknown;
};

/// How wrapped phase becomes encoder input planes.
enum class ChannelMode {
  /// Three planes: (cos+1)/2, (sin+1)/2, (phase+pi)/2pi.
  cyclic,
  /// One plane: (phase+pi)/2pi.
  phase_only,
};

int channel_count(ChannelMode mode);

/// Wraps a phase value to [-pi, pi).
double wrap_phase(double v);
/// Wraps and rounds to float, keeping the result inside the float image of [-pi, pi).
float wrap_phase_float(double v);

/// C planes of side x side values, plane-major then row-major.
struct ChannelStack {
  int channels = 0;
  int side = 0;
  std::vector<float> values;

  ChannelStack() = default;
  ChannelStack(int channels, int side, float fill = 0.0f);

  float& at(int c, int row, int col) {
    return values[(static_cast<std::size_t>(c) * side + row) * side + col];
  }
  float at(int c, int row, int col) const {
    return values[(static_cast<std::size_t>(c) * side + row) * side + col];
  }
  std::size_t plane_size() const { return static_cast<std::size_t>(side) * side; }
  bool empty() const { return values.empty(); }

  friend bool operator==(const ChannelStack&, const ChannelStack&) = default;
};

/// Renders wrapped phase (side x side, row-major) into encoder planes.
/// Throws ValidationError if a value is outside [-pi, pi).
ChannelStack render_phase(std::span<const float> phase, int side, ChannelMode mode = ChannelMode::cyclic);

/// A square wrapped-phase patch. Phase is validated on construction;
/// channels are filled by render_channels().
class InterferogramPatch {
 public:
  static constexpr int kMinSide = 8;

  InterferogramPatch() = default;
  /// Throws ValidationError unless the grid is square with side >= 8 and
  /// every value lies in [-pi, pi).
  InterferogramPatch(int side, std::vector<float> phase, PatchMeta meta = {});

  int side() const { return side_; }
  std::span<const float> phase() const { return phase_; }
  float phase_at(int row, int col) const { return phase_[static_cast<std::size_t>(row) * side_ + col]; }
  const PatchMeta& meta() const { return meta_; }
  PatchMeta& meta() { return meta_; }

  bool rendered() const { return !channels_.empty(); }
  const ChannelStack& channels() const { return channels_; }
  void set_channels(ChannelStack channels);

  friend bool operator==(const InterferogramPatch& a, const InterferogramPatch& b) {
    return a.side_ == b.side_ && a.phase_ == b.phase_ && a.channels_ == b.channels_;
  }

 private:
  int side_ = 0;
  std::vector<float> phase_;
  ChannelStack channels_;
  PatchMeta meta_;
};

/// Returns a copy of the patch with its channels rendered.
InterferogramPatch render_channels(InterferogramPatch patch, ChannelMode mode = ChannelMode::cyclic);

enum class Label : std::uint8_t { non_deformation = 0, deformation = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }
/// Throws ValidationError for anything other than 0 or 1.
Label label_from_int(int v);

struct LabeledPatch {
  InterferogramPatch patch;
  Label label = Label::non_deformation;
};

}  // namespace fringe
