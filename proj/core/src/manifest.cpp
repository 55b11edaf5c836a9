#include "fringe/manifest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "fringe/error.hpp"
#include "fringe/patch_io.hpp"

namespace fringe {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string where(const std::filesystem::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no) + ": ";
}

}  // namespace

const char* to_string(Split s) {
  return s == Split::train ? "train" : "test";
}

ManifestStats tally(const std::vector<ManifestEntry>& entries) {
  ManifestStats s;
  for (const auto& e : entries) {
    if (!e.label) {
      ++s.n_unlabeled;
    } else if (*e.label == Label::deformation) {
      ++s.n_positive;
    } else {
      ++s.n_negative;
    }
  }
  return s;
}

DatasetManifest::DatasetManifest(std::vector<ManifestEntry> entries, std::filesystem::path base_dir)
    : entries_(std::move(entries)), base_dir_(std::move(base_dir)) {
  std::unordered_set<std::string> seen;
  for (const auto& e : entries_) {
    if (e.path.empty()) throw ValidationError("manifest entry with empty path");
    if (!seen.insert(e.path).second) throw ValidationError("duplicate manifest path: " + e.path);
  }
  stats_ = tally(entries_);
}

std::vector<ManifestEntry> DatasetManifest::split(Split s) const {
  std::vector<ManifestEntry> out;
  for (const auto& e : entries_) {
    if (e.split == s) out.push_back(e);
  }
  return out;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());

  std::string line;
  if (!std::getline(in, line) || line != kManifestHeader) {
    throw ValidationError(where(path, 1) + "expected header '" + std::string(kManifestHeader) + "'");
  }

  std::vector<ManifestEntry> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3 && fields.size() != 4) {
      throw ValidationError(where(path, line_no) + "expected 3 or 4 tab-separated fields");
    }
    ManifestEntry e;
    e.path = fields[0];
    if (fields[1] == "-") {
      e.label = std::nullopt;
    } else if (fields[1] == "0") {
      e.label = Label::non_deformation;
    } else if (fields[1] == "1") {
      e.label = Label::deformation;
    } else {
      throw ValidationError(where(path, line_no) + "label '" + fields[1] + "' outside {0, 1, -}");
    }
    if (fields[2] == "train") {
      e.split = Split::train;
    } else if (fields[2] == "test") {
      e.split = Split::test;
    } else {
      throw ValidationError(where(path, line_no) + "split '" + fields[2] + "' is not train|test");
    }
    if (fields.size() == 4) {
      long long order = 0;
      const auto& f = fields[3];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), order);
      if (ec != std::errc{} || ptr != f.data() + f.size()) {
        throw ValidationError(where(path, line_no) + "order key '" + f + "' is not an integer");
      }
      e.order = order;
    }
    entries.push_back(std::move(e));
  }
  return DatasetManifest(std::move(entries), path.parent_path());
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << kManifestHeader << '\n';
  for (const auto& e : manifest.entries()) {
    out << e.path << '\t';
    if (e.label) {
      out << to_int(*e.label);
    } else {
      out << '-';
    }
    out << '\t' << to_string(e.split);
    if (e.order) out << '\t' << *e.order;
    out << '\n';
  }
  if (!out) throw IoError("failed writing manifest " + path.string());
}

std::vector<LoadedPatch> load_patches(const DatasetManifest& manifest, const std::vector<ManifestEntry>& entries,
                                      ChannelMode mode) {
  std::vector<LoadedPatch> out;
  out.reserve(entries.size());
  for (const auto& e : entries) {
    auto patch = read_patch(manifest.resolve(e));
    if (patch.meta().source_id.empty()) patch.meta().source_id = std::filesystem::path(e.path).stem().string();
    out.push_back({e, render_channels(std::move(patch), mode)});
  }
  return out;
}

}  // namespace fringe
