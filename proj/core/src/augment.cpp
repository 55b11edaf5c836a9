#include "fringe/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fringe/error.hpp"

namespace fringe {

namespace {

constexpr std::array<TransformKind, 7> kCanonicalOrder = {
    TransformKind::hflip,        TransformKind::vflip,          TransformKind::elastic, TransformKind::blur,
    TransformKind::multiplicative_noise, TransformKind::gaussian_noise, TransformKind::cutout,
};

std::vector<double> gaussian_kernel(int radius, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = w;
    sum += w;
  }
  for (auto& w : k) w /= sum;
  return k;
}

/// Separable convolution of one side x side plane with border replication.
std::vector<double> smooth_plane(const std::vector<double>& plane, int side, const std::vector<double>& kernel) {
  const int radius = static_cast<int>(kernel.size() / 2);
  std::vector<double> tmp(plane.size());
  std::vector<double> out(plane.size());
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int cc = std::clamp(c + k, 0, side - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] * plane[static_cast<std::size_t>(r) * side + cc];
      }
      tmp[static_cast<std::size_t>(r) * side + c] = acc;
    }
  }
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int rr = std::clamp(r + k, 0, side - 1);
        acc += kernel[static_cast<std::size_t>(k + radius)] * tmp[static_cast<std::size_t>(rr) * side + c];
      }
      out[static_cast<std::size_t>(r) * side + c] = acc;
    }
  }
  return out;
}

void require_params(const AppliedTransform& t, std::size_t n) {
  if (t.params.size() != n) {
    throw ValidationError(std::string("transform ") + to_string(t.kind) + " expects " + std::to_string(n) +
                          " parameters");
  }
}

}  // namespace

const char* to_string(TransformKind k) {
  switch (k) {
    case TransformKind::hflip: return "hflip";
    case TransformKind::vflip: return "vflip";
    case TransformKind::elastic: return "elastic";
    case TransformKind::blur: return "blur";
    case TransformKind::multiplicative_noise: return "multiplicative_noise";
    case TransformKind::gaussian_noise: return "gaussian_noise";
    case TransformKind::cutout: return "cutout";
  }
  return "?";
}

TransformKind transform_from_string(const std::string& name) {
  for (auto k : kCanonicalOrder) {
    if (name == to_string(k)) return k;
  }
  throw ValidationError("unknown transform '" + name + "'");
}

AugmentationConfig AugmentationConfig::identity() {
  AugmentationConfig c;
  for (auto k : kCanonicalOrder) c.toggle(k).enabled = false;
  return c;
}

TransformToggle& AugmentationConfig::toggle(TransformKind k) {
  switch (k) {
    case TransformKind::hflip: return hflip;
    case TransformKind::vflip: return vflip;
    case TransformKind::elastic: return elastic;
    case TransformKind::blur: return blur;
    case TransformKind::multiplicative_noise: return multiplicative_noise;
    case TransformKind::gaussian_noise: return gaussian_noise;
    case TransformKind::cutout: return cutout;
  }
  throw ValidationError("unknown transform kind");
}

const TransformToggle& AugmentationConfig::toggle(TransformKind k) const {
  return const_cast<AugmentationConfig*>(this)->toggle(k);
}

void AugmentationConfig::validate(int side) const {
  for (auto k : kCanonicalOrder) {
    const double p = toggle(k).probability;
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError(std::string("apply probability of ") + to_string(k) + " outside [0, 1]");
    }
  }
  const int hole = resolved_cutout_hole(side);
  if (hole < 1 || hole >= side) throw ValidationError("cutout hole side must satisfy 1 <= hole < patch side");
  if (blur_kernel < 1 || blur_kernel % 2 == 0) throw ValidationError("blur kernel side must be odd");
  if (!(blur_sigma_min > 0.0 && blur_sigma_max >= blur_sigma_min)) {
    throw ValidationError("blur sigma range must satisfy 0 < min <= max");
  }
  if (!(resolved_elastic_alpha(side) >= 0.0)) throw ValidationError("elastic alpha must be >= 0");
  if (!(resolved_elastic_sigma(side) > 0.0)) throw ValidationError("elastic sigma must be > 0");
  if (!(noise_sigma >= 0.0)) throw ValidationError("gaussian noise sigma must be >= 0");
  if (!(multiplicative_low >= 0.0 && multiplicative_high >= multiplicative_low)) {
    throw ValidationError("multiplicative noise range must satisfy 0 <= low <= high");
  }
}

void clamp_unit(ChannelStack& s) {
  for (auto& v : s.values) v = std::clamp(v, 0.0f, 1.0f);
}

ChannelStack hflip(const ChannelStack& in) {
  ChannelStack out = in;
  for (int ch = 0; ch < in.channels; ++ch) {
    for (int r = 0; r < in.side; ++r) {
      for (int c = 0; c < in.side; ++c) out.at(ch, r, c) = in.at(ch, r, in.side - 1 - c);
    }
  }
  return out;
}

ChannelStack vflip(const ChannelStack& in) {
  ChannelStack out = in;
  for (int ch = 0; ch < in.channels; ++ch) {
    for (int r = 0; r < in.side; ++r) {
      for (int c = 0; c < in.side; ++c) out.at(ch, r, c) = in.at(ch, in.side - 1 - r, c);
    }
  }
  return out;
}

ChannelStack cutout(const ChannelStack& in, int row, int col, int hole) {
  if (hole < 0 || row < 0 || col < 0 || row + hole > in.side || col + hole > in.side) {
    throw ValidationError("cutout hole does not fit inside the patch");
  }
  ChannelStack out = in;
  for (int ch = 0; ch < in.channels; ++ch) {
    for (int r = row; r < row + hole; ++r) {
      for (int c = col; c < col + hole; ++c) out.at(ch, r, c) = 0.0f;
    }
  }
  return out;
}

ChannelStack gaussian_blur(const ChannelStack& in, int kernel, double sigma) {
  if (kernel < 1 || kernel % 2 == 0) throw ValidationError("blur kernel side must be odd");
  if (!(sigma > 0.0)) throw ValidationError("blur sigma must be > 0");
  const auto weights = gaussian_kernel(kernel / 2, sigma);
  ChannelStack out = in;
  const std::size_t plane = in.plane_size();
  std::vector<double> buf(plane);
  for (int ch = 0; ch < in.channels; ++ch) {
    const std::size_t base = static_cast<std::size_t>(ch) * plane;
    for (std::size_t i = 0; i < plane; ++i) buf[i] = in.values[base + i];
    const auto smoothed = smooth_plane(buf, in.side, weights);
    for (std::size_t i = 0; i < plane; ++i) out.values[base + i] = static_cast<float>(smoothed[i]);
  }
  return out;
}

ChannelStack multiplicative_noise(const ChannelStack& in, double low, double high, std::uint64_t seed) {
  Rng rng(seed);
  ChannelStack out = in;
  const std::size_t plane = in.plane_size();
  for (std::size_t i = 0; i < plane; ++i) {
    const double factor = uniform(rng, low, high);
    for (int ch = 0; ch < in.channels; ++ch) {
      auto& v = out.values[static_cast<std::size_t>(ch) * plane + i];
      v = static_cast<float>(v * factor);
    }
  }
  clamp_unit(out);
  return out;
}

ChannelStack gaussian_noise(const ChannelStack& in, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  ChannelStack out = in;
  for (auto& v : out.values) v = static_cast<float>(v + sigma * standard_normal(rng));
  clamp_unit(out);
  return out;
}

DisplacementField make_displacement_field(int side, double alpha, double sigma, Rng& rng) {
  if (!(sigma > 0.0)) throw ValidationError("elastic sigma must be > 0");
  if (!(alpha >= 0.0)) throw ValidationError("elastic alpha must be >= 0");
  const std::size_t n = static_cast<std::size_t>(side) * side;
  DisplacementField f{side, std::vector<double>(n), std::vector<double>(n)};
  for (auto& v : f.d_row) v = uniform(rng, -1.0, 1.0);
  for (auto& v : f.d_col) v = uniform(rng, -1.0, 1.0);
  const auto kernel = gaussian_kernel(static_cast<int>(std::ceil(3.0 * sigma)), sigma);
  f.d_row = smooth_plane(f.d_row, side, kernel);
  f.d_col = smooth_plane(f.d_col, side, kernel);

  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) peak = std::max({peak, std::abs(f.d_row[i]), std::abs(f.d_col[i])});
  const double scale = peak > 0.0 ? alpha / peak : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f.d_row[i] *= scale;
    f.d_col[i] *= scale;
  }
  return f;
}

ChannelStack remap_bilinear(const ChannelStack& in, const DisplacementField& field) {
  if (field.side != in.side) throw ValidationError("displacement field side does not match channels");
  const int side = in.side;
  ChannelStack out(in.channels, side);
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * side + c;
      const double y = std::clamp(r + field.d_row[i], 0.0, side - 1.0);
      const double x = std::clamp(c + field.d_col[i], 0.0, side - 1.0);
      const int y0 = static_cast<int>(std::floor(y));
      const int x0 = static_cast<int>(std::floor(x));
      const int y1 = std::min(y0 + 1, side - 1);
      const int x1 = std::min(x0 + 1, side - 1);
      const double wy = y - y0;
      const double wx = x - x0;
      for (int ch = 0; ch < in.channels; ++ch) {
        const double top = (1.0 - wx) * in.at(ch, y0, x0) + wx * in.at(ch, y0, x1);
        const double bottom = (1.0 - wx) * in.at(ch, y1, x0) + wx * in.at(ch, y1, x1);
        out.at(ch, r, c) = static_cast<float>((1.0 - wy) * top + wy * bottom);
      }
    }
  }
  return out;
}

ChannelStack elastic_transform(const ChannelStack& in, double alpha, double sigma, Rng& rng) {
  const auto field = make_displacement_field(in.side, alpha, sigma, rng);
  if (alpha == 0.0) return in;
  return remap_bilinear(in, field);
}

ChannelStack apply_transform(const ChannelStack& in, const AppliedTransform& t) {
  switch (t.kind) {
    case TransformKind::hflip:
      return hflip(in);
    case TransformKind::vflip:
      return vflip(in);
    case TransformKind::elastic: {
      require_params(t, 2);
      Rng rng(t.seed);
      return elastic_transform(in, t.params[0], t.params[1], rng);
    }
    case TransformKind::blur:
      require_params(t, 2);
      return gaussian_blur(in, static_cast<int>(t.params[0]), t.params[1]);
    case TransformKind::multiplicative_noise:
      require_params(t, 2);
      return multiplicative_noise(in, t.params[0], t.params[1], t.seed);
    case TransformKind::gaussian_noise:
      require_params(t, 1);
      return gaussian_noise(in, t.params[0], t.seed);
    case TransformKind::cutout:
      require_params(t, 3);
      return cutout(in, static_cast<int>(t.params[0]), static_cast<int>(t.params[1]), static_cast<int>(t.params[2]));
  }
  throw ValidationError("unknown transform kind");
}

ChannelStack augment_view(const ChannelStack& source, const AugmentationConfig& config, Rng& rng,
                          Transcript& transcript) {
  const int side = source.side;
  ChannelStack view = source;
  for (auto kind : kCanonicalOrder) {
    const auto& toggle = config.toggle(kind);
    if (!toggle.enabled || !bernoulli(rng, toggle.probability)) continue;
    AppliedTransform t;
    t.kind = kind;
    t.seed = rng();
    switch (kind) {
      case TransformKind::hflip:
      case TransformKind::vflip:
        break;
      case TransformKind::elastic:
        t.params = {config.resolved_elastic_alpha(side), config.resolved_elastic_sigma(side)};
        break;
      case TransformKind::blur:
        t.params = {static_cast<double>(config.blur_kernel),
                    uniform(rng, config.blur_sigma_min, config.blur_sigma_max)};
        break;
      case TransformKind::multiplicative_noise:
        t.params = {config.multiplicative_low, config.multiplicative_high};
        break;
      case TransformKind::gaussian_noise:
        t.params = {config.noise_sigma};
        break;
      case TransformKind::cutout: {
        const int hole = config.resolved_cutout_hole(side);
        const auto span = static_cast<std::size_t>(side - hole + 1);
        t.params = {static_cast<double>(uniform_index(rng, span)), static_cast<double>(uniform_index(rng, span)),
                    static_cast<double>(hole)};
        break;
      }
    }
    view = apply_transform(view, t);
    transcript.push_back(std::move(t));
  }
  clamp_unit(view);
  return view;
}

ChannelStack replay(const ChannelStack& origin, const Transcript& transcript) {
  ChannelStack view = origin;
  for (const auto& t : transcript) view = apply_transform(view, t);
  clamp_unit(view);
  return view;
}

AugmentedPair make_pair(const InterferogramPatch& patch, const AugmentationConfig& config, Rng& rng,
                        std::size_t origin) {
  if (!patch.rendered()) throw ValidationError("make_pair requires a rendered patch (call render_channels)");
  config.validate(patch.side());
  AugmentedPair pair;
  pair.origin = origin;
  pair.view_i = augment_view(patch.channels(), config, rng, pair.transcript_i);
  pair.view_j = augment_view(patch.channels(), config, rng, pair.transcript_j);
  return pair;
}

nlohmann::json transcript_to_json(const Transcript& t) {
  auto arr = nlohmann::json::array();
  for (const auto& a : t) {
    arr.push_back({{"kind", to_string(a.kind)}, {"params", a.params}, {"seed", a.seed}});
  }
  return arr;
}

Transcript transcript_from_json(const nlohmann::json& j) {
  Transcript t;
  for (const auto& item : j) {
    AppliedTransform a;
    a.kind = transform_from_string(item.at("kind").get<std::string>());
    a.params = item.at("params").get<std::vector<double>>();
    a.seed = item.at("seed").get<std::uint64_t>();
    t.push_back(std::move(a));
  }
  return t;
}

}  // namespace fringe
