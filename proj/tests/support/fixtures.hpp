#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fringe/model.hpp"
#include "fringe/patch.hpp"
#include "fringe/synthetic.hpp"

namespace fringe::fixture {

/// A fresh directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "fringe");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// Rendered synthetic patches (cyclic channels).
std::vector<SyntheticPatch> synthetic(std::size_t n, int side, double fraction, std::uint64_t seed);
std::vector<InterferogramPatch> patches_of(const std::vector<SyntheticPatch>& set);
std::vector<LabeledPatch> labeled_of(const std::vector<SyntheticPatch>& set);

/// Small tiny-conv encoder for fast tests.
EncoderConfig small_encoder(int side = 16, std::uint64_t seed = 1);

/// Phase grid from a function of (row, col), wrapped.
InterferogramPatch patch_from(int side, double (*phase)(int, int));

}  // namespace fringe::fixture
