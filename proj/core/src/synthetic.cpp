#include "fringe/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fringe/error.hpp"
#include "fringe/rng.hpp"

namespace fringe {

namespace {
constexpr double kPi = std::numbers::pi;
}

void SyntheticFringeSpec::validate() const {
  if (n_samples < 1) throw ValidationError("n_samples must be >= 1");
  if (side < InterferogramPatch::kMinSide) throw ValidationError("side must be >= 8");
  if (!(deformation_fraction >= 0.0 && deformation_fraction <= 1.0)) {
    throw ValidationError("deformation_fraction must lie in [0, 1]");
  }
  if (!(min_cycles > 0.0 && max_cycles >= min_cycles)) {
    throw ValidationError("fringe cycle range must satisfy 0 < min <= max");
  }
  if (!(noise_sigma >= 0.0)) throw ValidationError("noise_sigma must be >= 0");
  if (!(ramp_max_cycles >= 0.0)) throw ValidationError("ramp_max_cycles must be >= 0");
}

bool FringeTruth::inside_fringe_disk(double row, double col) const {
  if (!has_bullseye) return false;
  const double dr = row - center_row;
  const double dc = col - center_col;
  return dr * dr + dc * dc <= fringe_radius * fringe_radius;
}

std::size_t positive_count(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n) * fraction + 0.5));
}

double fringe_radius(double sigma, double amplitude) {
  if (amplitude <= kPi) return 0.0;
  return sigma * std::sqrt(2.0 * std::log(amplitude / kPi));
}

std::vector<double> bullseye_displacement(int side, double center_row, double center_col, double sigma,
                                          double amplitude) {
  std::vector<double> u(static_cast<std::size_t>(side) * side);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const double dr = r - center_row;
      const double dc = c - center_col;
      u[static_cast<std::size_t>(r) * side + c] = amplitude * std::exp(-(dr * dr + dc * dc) * inv);
    }
  }
  return u;
}

namespace {

SyntheticPatch make_one(const SyntheticFringeSpec& spec, std::size_t index, bool positive) {
  Rng rng(derive_seed(spec.seed, {label_key("synthetic"), index}));
  const int side = spec.side;
  FringeTruth truth;

  const double ramp_cycles = uniform(rng, 0.0, spec.ramp_max_cycles);
  const double angle = uniform(rng, 0.0, 2.0 * kPi);
  const double slope = 2.0 * kPi * ramp_cycles / side;
  truth.ramp_row = slope * std::sin(angle);
  truth.ramp_col = slope * std::cos(angle);
  truth.ramp_offset = uniform(rng, -kPi, kPi);

  std::vector<double> field(static_cast<std::size_t>(side) * side, 0.0);
  if (positive) {
    truth.has_bullseye = true;
    truth.center_row = uniform(rng, 0.3 * side, 0.7 * side);
    truth.center_col = uniform(rng, 0.3 * side, 0.7 * side);
    truth.sigma = uniform(rng, side / 10.0, side / 6.0);
    truth.amplitude = 2.0 * kPi * uniform(rng, spec.min_cycles, spec.max_cycles);
    truth.fringe_radius = fringe_radius(truth.sigma, truth.amplitude);
    field = bullseye_displacement(side, truth.center_row, truth.center_col, truth.sigma, truth.amplitude);
  }

  std::vector<float> phase(field.size());
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * side + c;
      double v = field[i] + truth.ramp_offset + truth.ramp_row * r + truth.ramp_col * c;
      if (spec.noise_sigma > 0.0) v += spec.noise_sigma * standard_normal(rng);
      phase[i] = wrap_phase_float(v);
    }
  }

  PatchMeta meta;
  meta.source_id = "synthetic-" + std::to_string(spec.seed) + "-" + std::to_string(index);
  SyntheticPatch out;
  out.labeled.patch = InterferogramPatch(side, std::move(phase), std::move(meta));
  out.labeled.label = positive ? Label::deformation : Label::non_deformation;
  out.truth = truth;
  return out;
}

}  // namespace

std::vector<SyntheticPatch> generate_synthetic(const SyntheticFringeSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n_samples;
  const std::size_t n_pos = std::min(n, positive_count(n, spec.deformation_fraction));

  std::vector<bool> positive(n, false);
  std::fill(positive.begin(), positive.begin() + static_cast<std::ptrdiff_t>(n_pos), true);
  Rng order_rng(derive_seed(spec.seed, {label_key("synthetic-order")}));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = uniform_index(order_rng, i);
    const bool tmp = positive[i - 1];
    positive[i - 1] = positive[j];
    positive[j] = tmp;
  }

  std::vector<SyntheticPatch> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_one(spec, i, positive[i]));
  return out;
}

}  // namespace fringe
