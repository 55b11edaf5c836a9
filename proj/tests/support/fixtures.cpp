#include "fixtures.hpp"

#include <atomic>
#include <chrono>
#include <unistd.h>

namespace fringe::fixture {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  path_ = std::filesystem::temp_directory_path() /
          (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<SyntheticPatch> synthetic(std::size_t n, int side, double fraction, std::uint64_t seed) {
  SyntheticFringeSpec spec;
  spec.n_samples = n;
  spec.side = side;
  spec.deformation_fraction = fraction;
  spec.seed = seed;
  auto set = generate_synthetic(spec);
  for (auto& p : set) p.labeled.patch = render_channels(std::move(p.labeled.patch));
  return set;
}

std::vector<InterferogramPatch> patches_of(const std::vector<SyntheticPatch>& set) {
  std::vector<InterferogramPatch> out;
  for (const auto& p : set) out.push_back(p.labeled.patch);
  return out;
}

std::vector<LabeledPatch> labeled_of(const std::vector<SyntheticPatch>& set) {
  std::vector<LabeledPatch> out;
  for (const auto& p : set) out.push_back(p.labeled);
  return out;
}

EncoderConfig small_encoder(int side, std::uint64_t seed) {
  EncoderConfig c;
  c.input_side = side;
  c.tiny_widths = {4, 8, 8, 8};
  c.projection_dim = 8;
  c.seed = seed;
  return c;
}

InterferogramPatch patch_from(int side, double (*phase)(int, int)) {
  std::vector<float> v(static_cast<std::size_t>(side) * side);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) v[static_cast<std::size_t>(r) * side + c] = wrap_phase_float(phase(r, c));
  }
  return render_channels(InterferogramPatch(side, std::move(v)));
}

}  // namespace fringe::fixture
