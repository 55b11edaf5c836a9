#include <gtest/gtest.h>

#include <fstream>

#include "fixtures.hpp"
#include "fringe/error.hpp"
#include "fringe/manifest.hpp"
#include "fringe/patch_io.hpp"

using namespace fringe;

namespace {

void write_text(const std::filesystem::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST(Manifest, RoundTripPreservesEntriesAndStats) {
  fixture::TempDir dir;
  std::vector<ManifestEntry> entries{
      {"a.iph", Label::deformation, Split::train, std::nullopt},
      {"b.iph", Label::non_deformation, Split::test, 4},
      {"sub/c.iph", std::nullopt, Split::train, -2},
  };
  DatasetManifest m(entries, dir.path());
  EXPECT_EQ(m.stats(), (ManifestStats{1, 1, 1}));
  save_manifest(m, dir / "manifest.tsv");
  const DatasetManifest back = load_manifest(dir / "manifest.tsv");
  EXPECT_EQ(back.entries(), entries);
  EXPECT_EQ(back.stats(), m.stats());
  EXPECT_EQ(back.base_dir(), dir.path());
  EXPECT_EQ(back.split(Split::test).size(), 1u);
}

TEST(Manifest, StatsMatchTallyOnRandomEntries) {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ManifestEntry> entries;
    ManifestStats expect;
    const auto n = uniform_index(rng, 30);
    for (std::size_t i = 0; i < n; ++i) {
      ManifestEntry e{"p" + std::to_string(i), std::nullopt, Split::train, std::nullopt};
      switch (uniform_index(rng, 3)) {
        case 0: e.label = Label::deformation; ++expect.n_positive; break;
        case 1: e.label = Label::non_deformation; ++expect.n_negative; break;
        default: ++expect.n_unlabeled;
      }
      entries.push_back(e);
    }
    EXPECT_EQ(DatasetManifest(entries).stats(), expect);
  }
}

TEST(Manifest, DuplicatePathsRejected) {
  std::vector<ManifestEntry> entries{{"a", std::nullopt, Split::train, std::nullopt},
                                     {"a", Label::deformation, Split::test, std::nullopt}};
  EXPECT_THROW(DatasetManifest{entries}, ValidationError);
}

TEST(Manifest, MalformedFilesRejected) {
  fixture::TempDir dir;
  EXPECT_THROW(load_manifest(dir / "none.tsv"), IoError);
  write_text(dir / "hdr.tsv", "#something else\na\t1\ttrain\n");
  EXPECT_THROW(load_manifest(dir / "hdr.tsv"), ValidationError);
  write_text(dir / "lab.tsv", std::string(kManifestHeader) + "\na\t2\ttrain\n");
  EXPECT_THROW(load_manifest(dir / "lab.tsv"), ValidationError);
  write_text(dir / "split.tsv", std::string(kManifestHeader) + "\na\t1\tvalid\n");
  EXPECT_THROW(load_manifest(dir / "split.tsv"), ValidationError);
  write_text(dir / "dup.tsv", std::string(kManifestHeader) + "\na\t1\ttrain\na\t0\ttest\n");
  EXPECT_THROW(load_manifest(dir / "dup.tsv"), ValidationError);
  write_text(dir / "cols.tsv", std::string(kManifestHeader) + "\na\t1\n");
  EXPECT_THROW(load_manifest(dir / "cols.tsv"), ValidationError);
}

TEST(Manifest, LoadPatchesRendersChannels) {
  fixture::TempDir dir;
  const auto set = fixture::synthetic(2, 16, 0.5, 1);
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::string rel = "p" + std::to_string(i) + ".iph";
    write_patch(dir / rel, set[i].labeled.patch);
    entries.push_back({rel, set[i].labeled.label, Split::train, std::nullopt});
  }
  DatasetManifest m(entries, dir.path());
  const auto loaded = load_patches(m, m.entries(), ChannelMode::phase_only);
  ASSERT_EQ(loaded.size(), 2u);
  for (const auto& lp : loaded) {
    EXPECT_TRUE(lp.patch.rendered());
    EXPECT_EQ(lp.patch.channels().channels, 1);
  }
}
