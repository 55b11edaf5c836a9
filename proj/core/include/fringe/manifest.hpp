#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fringe/patch.hpp"

namespace fringe {

inline constexpr const char* kManifestHeader = "#insar-manifest v1";

enum class Split { train, test };

struct ManifestEntry {
  std::string path;  ///< relative to the manifest's directory
  std::optional<Label> label;
  Split split = Split::train;
  /// Chronological key; only sequence monitoring requires it.
  std::optional<long long> order;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct ManifestStats {
  std::size_t n_positive = 0;
  std::size_t n_negative = 0;
  std::size_t n_unlabeled = 0;

  friend bool operator==(const ManifestStats&, const ManifestStats&) = default;
};

ManifestStats tally(const std::vector<ManifestEntry>& entries);

/// A validated list of patch references. Paths are unique and stats always
/// equal the tallies of the entries.
class DatasetManifest {
 public:
  DatasetManifest() = default;
  /// Throws ValidationError on duplicate paths.
  explicit DatasetManifest(std::vector<ManifestEntry> entries, std::filesystem::path base_dir = {});

  const std::vector<ManifestEntry>& entries() const { return entries_; }
  const ManifestStats& stats() const { return stats_; }
  const std::filesystem::path& base_dir() const { return base_dir_; }

  std::vector<ManifestEntry> split(Split s) const;
  std::filesystem::path resolve(const ManifestEntry& e) const { return base_dir_ / e.path; }

 private:
  std::vector<ManifestEntry> entries_;
  ManifestStats stats_;
  std::filesystem::path base_dir_;
};

/// Reads `#insar-manifest v1` followed by tab-separated
/// `<path> <label:0|1|-> <split:train|test> [<order>]` records.
/// Missing file -> IoError; malformed record, bad label or duplicate path -> ValidationError.
DatasetManifest load_manifest(const std::filesystem::path& path);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Resolves, reads and renders every patch of the given entries.
struct LoadedPatch {
  ManifestEntry entry;
  InterferogramPatch patch;
};
std::vector<LoadedPatch> load_patches(const DatasetManifest& manifest, const std::vector<ManifestEntry>& entries,
                                      ChannelMode mode);

const char* to_string(Split s);

}  // namespace fringe
