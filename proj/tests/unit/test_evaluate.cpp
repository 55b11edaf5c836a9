#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "fringe/cam.hpp"
#include "fringe/error.hpp"
#include "fringe/evaluate.hpp"
#include "fringe/image_io.hpp"
#include "oracles.hpp"
#include "published_table.hpp"

using namespace fringe;

namespace {

ConfusionCounts counts(const published::Entry& e) {
  return {static_cast<std::uint64_t>(e.tp), static_cast<std::uint64_t>(e.fp), static_cast<std::uint64_t>(e.tn),
          static_cast<std::uint64_t>(e.fn)};
}

// A finetuned checkpoint whose classifier fires for patches whose h lies
// beyond the midpoint between two reference patches.
Checkpoint threshold_checkpoint(const InterferogramPatch& neg, const InterferogramPatch& pos) {
  EncoderModel model(fixture::small_encoder(16, 3));
  const InterferogramPatch* both[] = {&neg, &pos};
  const Tensor h = encode_patches(model, both);
  const int d = h.dim(1);
  Linear& lin = model.classifier().linear();
  lin.weight().value.fill(0.0);
  lin.bias()->value.fill(0.0);
  double offset = 0;
  for (int k = 0; k < d; ++k) {
    const double diff = h[d + k] - h[k];
    lin.weight().value[d + k] = diff;
    offset += diff * 0.5 * (h[d + k] + h[k]);
  }
  lin.bias()->value[1] = -offset;
  return make_checkpoint(model, Stage::finetuned);
}

InterferogramPatch constant_patch(float v) {
  return render_channels(InterferogramPatch(16, std::vector<float>(256, v)));
}

}  // namespace

TEST(Metrics, WorkedExample) {
  const Metrics m = compute_metrics({347, 10, 355, 57});
  EXPECT_NEAR(m.precision, 347.0 / 357.0, 1e-12);
  EXPECT_NEAR(m.recall, 347.0 / 404.0, 1e-12);
  EXPECT_NEAR(m.f1, 0.91196, 1e-5);
  EXPECT_NEAR(m.accuracy, 702.0 / 769.0, 1e-12);
  EXPECT_NEAR(m.f1, 0.911, 0.001);
}

TEST(Metrics, DegenerateConventions) {
  EXPECT_EQ(compute_metrics({}).accuracy, 0.0);
  const Metrics none_predicted = compute_metrics({0, 0, 5, 3});
  EXPECT_EQ(none_predicted.precision, 1.0);
  EXPECT_EQ(none_predicted.recall, 0.0);
  EXPECT_EQ(none_predicted.f1, 0.0);
  const Metrics no_positives = compute_metrics({0, 2, 5, 0});
  EXPECT_EQ(no_positives.recall, 1.0);
  EXPECT_EQ(no_positives.precision, 0.0);
  EXPECT_EQ(no_positives.f1, 0.0);
}

TEST(Metrics, PropertiesOnRandomCounts) {
  Rng rng(1);
  for (int t = 0; t < 10000; ++t) {
    ConfusionCounts c{uniform_index(rng, 50), uniform_index(rng, 50), uniform_index(rng, 50), uniform_index(rng, 50)};
    const Metrics m = compute_metrics(c);
    for (double v : {m.accuracy, m.precision, m.recall, m.f1}) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
    if (c.total() > 0) ASSERT_NEAR(m.accuracy, double(c.tp + c.tn) / double(c.total()), 1e-15);
    if (m.precision + m.recall > 0) {
      ASSERT_NEAR(m.f1, 2 * m.precision * m.recall / (m.precision + m.recall), 1e-12);
      ASSERT_LE(m.f1, std::max(m.precision, m.recall) + 1e-12);
      ASSERT_GE(m.f1, std::min(m.precision, m.recall) - 1e-12);
    }
    if (c.tp + c.fp + c.fn > 0) ASSERT_NEAR(m.f1, 2.0 * c.tp / double(2 * c.tp + c.fp + c.fn), 1e-12);
  }
}

TEST(Metrics, CountsAccumulateAndRoundTrip) {
  ConfusionCounts c;
  c.add(1, 1);
  c.add(1, 0);
  c.add(0, 1);
  c.add(0, 0);
  c.add(0, 0);
  EXPECT_EQ(c, (ConfusionCounts{1, 1, 2, 1}));
  EXPECT_EQ(counts_from_json(to_json(c)), c);
}

// The printed scores follow one convention: P and R truncated to three
// decimals, F1 computed from those and truncated again, ACC truncated to a
// whole percent. Recomputing under that convention reproduces every cell.
TEST(Metrics, PublishedScoresFollowTruncation) {
  for (const auto& row : published::kResNetRows) {
    for (const auto* e : {&row.s1, &row.c1}) {
      const Metrics m = compute_metrics(counts(*e));
      const double p = oracle::truncate_decimals(m.precision, 3);
      const double r = oracle::truncate_decimals(m.recall, 3);
      EXPECT_NEAR(p, e->precision, 1e-12) << row.model;
      EXPECT_NEAR(r, e->recall, 1e-12) << row.model;
      EXPECT_NEAR(oracle::truncate_decimals(2 * p * r / (p + r), 3), e->f1, 1e-12) << row.model;
      EXPECT_EQ(static_cast<int>(std::floor(100 * m.accuracy)), e->acc_percent) << row.model;
    }
  }
}

TEST(Cam, WeightedSumReluNormalize) {
  Tensor maps({2, 2, 2});
  // F0 = [[1,0],[0,0]], F1 = [[0,0],[0,1]]
  maps[0] = 1.0;
  maps[7] = 1.0;
  const std::vector<double> w{1.0, -1.0};
  const auto cam = class_activation_map(maps, w, 2);
  EXPECT_EQ(cam, (std::vector<double>{1.0, 0.0, 0.0, 0.0}));
  const std::vector<double> w2{2.0, 1.0};
  const auto cam2 = class_activation_map(maps, w2, 2);
  EXPECT_EQ(cam2, (std::vector<double>{1.0, 0.0, 0.0, 0.5}));
}

TEST(Cam, ConstantMapIsZero) {
  Tensor maps({1, 2, 2}, 3.0);
  const std::vector<double> w{-1.0};
  for (double v : class_activation_map(maps, w, 8)) EXPECT_EQ(v, 0.0);
}

TEST(Cam, UpsampleIsHalfPixelBilinear) {
  const std::vector<double> plane{0.0, 1.0, 2.0, 3.0};
  const auto up = upsample_bilinear(plane, 2, 4);
  // Output centre (r + 0.5) / 2 - 0.5 in source coordinates, clamped to the edge.
  auto at = [&](double y, double x) {
    y = std::clamp(y, 0.0, 1.0);
    x = std::clamp(x, 0.0, 1.0);
    return (1 - y) * ((1 - x) * plane[0] + x * plane[1]) + y * ((1 - x) * plane[2] + x * plane[3]);
  };
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(up[r * 4 + c], at((r + 0.5) / 2 - 0.5, (c + 0.5) / 2 - 0.5), 1e-12);
}

TEST(Cam, ComputeCamMatchesManualWeights) {
  EncoderModel model(fixture::small_encoder(16, 4));
  const auto set = fixture::synthetic(1, 16, 1.0, 2);
  const auto& patch = set[0].labeled.patch;
  const CamResult cam = compute_cam(model, patch, 1);
  EXPECT_EQ(cam.class_index, 1);
  ASSERT_EQ(cam.map.size(), 256u);
  const InterferogramPatch* one[] = {&patch};
  const Tensor batch_maps = model.feature_maps(make_batch(one), Mode::eval);
  const int k = batch_maps.dim(1);
  const Tensor maps = batch_maps.reshaped({k, batch_maps.dim(2), batch_maps.dim(3)});
  std::vector<double> w(model.classifier().linear().weight().value.values().begin() + k,
                        model.classifier().linear().weight().value.values().begin() + 2 * k);
  EXPECT_EQ(cam.map, class_activation_map(maps, w, 16));
  EXPECT_EQ(*std::max_element(cam.map.begin(), cam.map.end()), cam.map[cam.argmax_row * 16 + cam.argmax_col]);
  EXPECT_THROW(compute_cam(model, patch, 2), ValidationError);
  EXPECT_EQ(compute_cam(model, patch).class_index, cam.predicted);
}

TEST(Cam, PngFileNamedAndReadable) {
  fixture::TempDir dir;
  EncoderModel model(fixture::small_encoder(16, 4));
  const auto set = fixture::synthetic(1, 16, 1.0, 2);
  const CamResult cam = compute_cam(model, set[0].labeled.patch, 0);
  write_cam(dir.path(), "abc", cam);
  EXPECT_EQ(cam_filename("abc", 0), "abc_cam_0.png");
  const GrayImage img = read_gray_image(dir / "abc_cam_0.png");
  EXPECT_EQ(img.rows, 16);
  EXPECT_EQ(img.cols, 16);
  for (int i = 0; i < 256; ++i) EXPECT_EQ(img.pixels[i], static_cast<std::uint8_t>(std::lround(255 * cam.map[i])));
}

TEST(Evaluate, RequiresFinetunedCheckpoint) {
  EncoderModel model(fixture::small_encoder());
  const auto set = fixture::synthetic(2, 16, 0.5, 1);
  std::vector<EvalSample> samples{{"a", &set[0].labeled.patch, set[0].labeled.label}};
  EXPECT_THROW(evaluate(make_checkpoint(model, Stage::pretrained), samples), StageError);
  EXPECT_THROW(evaluate(make_checkpoint(model, Stage::finetuned), {}), ConfigError);
  EXPECT_NO_THROW(evaluate(make_checkpoint(model, Stage::finetuned), samples));
}

TEST(Evaluate, ReportCountsAndFileRoundTrip) {
  const auto neg = constant_patch(-3.0f), pos = constant_patch(1.0f);
  const Checkpoint ckpt = threshold_checkpoint(neg, pos);
  std::vector<EvalSample> samples{{"n1", &neg, Label::non_deformation},
                                  {"n2", &neg, Label::deformation},
                                  {"p1", &pos, Label::deformation},
                                  {"p2", &pos, Label::non_deformation},
                                  {"p3", &pos, Label::deformation}};
  const EvaluationReport r = evaluate(ckpt, samples);
  EXPECT_EQ(r.counts, (ConfusionCounts{2, 1, 1, 1}));
  EXPECT_EQ(r.metrics, compute_metrics(r.counts));
  ASSERT_EQ(r.samples.size(), 5u);
  EXPECT_EQ(r.samples[2].prediction, 1);
  EXPECT_EQ(r.header()["conventions"]["positive_class"], 1);
  fixture::TempDir dir;
  write_report(r, dir / "report.jsonl");
  EXPECT_EQ(read_report(dir / "report.jsonl"), r);
}

TEST(Evaluate, SequenceFirstAlarmAfterEightNegatives) {
  const auto neg = constant_patch(-3.0f), pos = constant_patch(1.0f);
  const Checkpoint ckpt = threshold_checkpoint(neg, pos);
  // Twelve acquisitions listed out of order; the last four carry the signal.
  std::vector<SequenceItem> items;
  std::vector<Label> expert;
  for (int t = 11; t >= 0; --t) {
    items.push_back({"t" + std::to_string(t), 100 + t, t >= 8 ? &pos : &neg});
    expert.push_back(t >= 8 ? Label::deformation : Label::non_deformation);
  }
  const SequenceReport r = evaluate_sequence(ckpt, items, expert);
  ASSERT_EQ(r.steps.size(), 12u);
  for (int t = 0; t < 12; ++t) {
    EXPECT_EQ(r.steps[t].order, 100 + t);
    EXPECT_EQ(r.steps[t].prediction, t >= 8 ? 1 : 0);
    EXPECT_EQ(r.steps[t].expert, t >= 8 ? 1 : 0);
  }
  ASSERT_TRUE(r.first_alarm.has_value());
  EXPECT_EQ(*r.first_alarm, 9u);
  EXPECT_EQ(r.agreement, 1.0);
  EXPECT_EQ(r.to_json()["first_alarm"], 9);

  const SequenceReport blind = evaluate_sequence(ckpt, items);
  EXPECT_FALSE(blind.agreement.has_value());
  EXPECT_FALSE(blind.first_alarm.has_value());
}

TEST(Evaluate, SequenceNeedsOrderKeys) {
  const auto neg = constant_patch(-3.0f), pos = constant_patch(1.0f);
  const Checkpoint ckpt = threshold_checkpoint(neg, pos);
  std::vector<SequenceItem> items{{"a", 1, &neg}, {"b", std::nullopt, &pos}};
  EXPECT_THROW(evaluate_sequence(ckpt, items), ValidationError);
}
