#include <gtest/gtest.h>

#include <fstream>

#include "fixtures.hpp"
#include "fringe/checkpoint.hpp"
#include "fringe/config.hpp"
#include "fringe/error.hpp"
#include "fringe/model.hpp"
#include "fringe/training_log.hpp"

using namespace fringe;

namespace {

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Checkpoint, SaveLoadSaveIsByteIdentical) {
  fixture::TempDir dir;
  EncoderModel model(fixture::small_encoder());
  Checkpoint c = make_checkpoint(model, Stage::pretrained);
  c.epoch = 3;
  c.step = 17;
  c.rng_state = "abc";
  c.metadata["note"] = {1, 2, 3};
  save_checkpoint(dir / "a.fckp", c);
  const Checkpoint back = load_checkpoint(dir / "a.fckp");
  save_checkpoint(dir / "b.fckp", back);
  EXPECT_EQ(read_bytes(dir / "a.fckp"), read_bytes(dir / "b.fckp"));
  EXPECT_EQ(back.tensors, c.tensors);
  EXPECT_EQ(back.metadata, c.metadata);
  EXPECT_EQ(back.config, c.config);
  EXPECT_EQ(back.epoch, 3u);
  EXPECT_EQ(back.rng_state, "abc");
  EXPECT_EQ(read_bytes(dir / "a.fckp").substr(0, 6), "FCKP1\n");
}

TEST(Checkpoint, ModelRestoresExactly) {
  EncoderModel model(fixture::small_encoder(16, 8));
  // Perturb buffers so running statistics are covered too.
  for (auto& [name, t] : model.named_tensors())
    if (name.find("running_mean") != std::string::npos) t->fill(0.25);
  const Checkpoint c = make_checkpoint(model, Stage::finetuned);
  EncoderModel restored = model_from_checkpoint(deserialize_checkpoint(serialize_checkpoint(c)));
  auto a = model.named_tensors(), b = restored.named_tensors();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].first, b[i].first);
    EXPECT_EQ(*a[i].second, *b[i].second) << a[i].first;
  }
  const auto set = fixture::synthetic(3, 16, 0.5, 1);
  const auto patches = fixture::patches_of(set);
  std::vector<const InterferogramPatch*> ptrs;
  for (const auto& p : patches) ptrs.push_back(&p);
  EXPECT_EQ(encode_patches(model, ptrs), encode_patches(restored, ptrs));
}

TEST(Checkpoint, CorruptionDetected) {
  EncoderModel model(fixture::small_encoder());
  const std::string bytes = serialize_checkpoint(make_checkpoint(model, Stage::pretrained));
  EXPECT_THROW(deserialize_checkpoint("XXXXX\n" + bytes.substr(6)), ValidationError);
  EXPECT_THROW(deserialize_checkpoint(bytes.substr(0, bytes.size() - 8)), ValidationError);
  EXPECT_THROW(deserialize_checkpoint(bytes + "x"), ValidationError);
  EXPECT_THROW(deserialize_checkpoint("FCKP1\n"), ValidationError);
  fixture::TempDir dir;
  EXPECT_THROW(load_checkpoint(dir / "missing.fckp"), IoError);
}

TEST(Checkpoint, MismatchedLayoutRejected) {
  EncoderModel small(fixture::small_encoder(16, 1));
  auto cfg = fixture::small_encoder(16, 1);
  cfg.tiny_widths = {4, 8, 8, 16};
  EncoderModel wider(cfg);
  EXPECT_THROW(load_model_tensors(wider, make_checkpoint(small, Stage::pretrained)), ValidationError);
  Checkpoint c = make_checkpoint(small, Stage::pretrained);
  c.tensors.erase(c.tensors.begin());
  EXPECT_THROW(load_model_tensors(small, c), ValidationError);
}

TEST(Checkpoint, ImportCopiesBackboneOnly) {
  fixture::TempDir dir;
  EncoderModel source(fixture::small_encoder(16, 1));
  save_checkpoint(dir / "src.fckp", make_checkpoint(source, Stage::pretrained));
  auto cfg = fixture::small_encoder(16, 2);
  cfg.init = WeightInit::imported;
  cfg.import_path = (dir / "src.fckp").string();
  EncoderModel imported(cfg);
  EncoderModel fresh(fixture::small_encoder(16, 2));
  EXPECT_EQ(parameter_checksum(imported.backbone_parameters()), parameter_checksum(source.backbone_parameters()));
  EXPECT_EQ(parameter_checksum(imported.classifier_parameters()), parameter_checksum(fresh.classifier_parameters()));
}

TEST(Checkpoint, StageGuard) {
  EncoderModel model(fixture::small_encoder());
  const Checkpoint c = make_checkpoint(model, Stage::pretrained);
  EXPECT_NO_THROW(require_stage(c, Stage::pretrained));
  EXPECT_THROW(require_stage(c, Stage::finetuned), StageError);
  EXPECT_EQ(stage_from_string(to_string(Stage::finetuned)), Stage::finetuned);
  EXPECT_THROW(stage_from_string("midway"), ValidationError);
}

TEST(TrainingLog, JsonLinesRoundTrip) {
  fixture::TempDir dir;
  std::vector<LogRecord> records{{"pretrain", 0, 1, 2.5, 1e-3, 16, 7}, {"pretrain", 0, 2, 2.25, 1e-3, 16, 7}};
  {
    TrainingLogWriter w(dir / "log.jsonl");
    w.write(records[0]);
  }
  {
    TrainingLogWriter w(dir / "log.jsonl", true);
    w.write(records[1]);
  }
  EXPECT_EQ(read_training_log(dir / "log.jsonl"), records);
  EXPECT_DOUBLE_EQ(window_mean(records, 0, 2), 2.375);
  EXPECT_DOUBLE_EQ(window_mean(records, 1, 10), 2.25);
}
