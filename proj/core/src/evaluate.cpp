#include "fringe/evaluate.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "fringe/error.hpp"

namespace fringe {

using nlohmann::json;

json EvaluationReport::header() const {
  return {{"kind", "evaluation"},
          {"n", counts.total()},
          {"counts", to_json(counts)},
          {"accuracy", metrics.accuracy},
          {"precision", metrics.precision},
          {"recall", metrics.recall},
          {"f1", metrics.f1},
          {"conventions",
           {{"positive_class", 1},
            {"decision", "argmax of (negative, positive) logits; ties -> 0"},
            {"precision_without_predicted_positives", 1.0},
            {"recall_without_positives", 1.0},
            {"f1_when_precision_plus_recall_is_zero", 0.0}}}};
}

EvaluationReport evaluate_model(EncoderModel& model, std::span<const EvalSample> samples) {
  EvaluationReport report;
  std::vector<const InterferogramPatch*> patches;
  patches.reserve(samples.size());
  for (const auto& s : samples) {
    if (!s.patch) throw ValidationError("evaluation sample " + s.id + " has no patch");
    patches.push_back(s.patch);
  }
  const Tensor h = encode_patches(model, patches);
  const Tensor logits = classify(model.classifier(), h);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    SampleRecord r;
    r.id = samples[i].id;
    r.label = to_int(samples[i].label);
    r.negative_logit = logits[2 * i];
    r.positive_logit = logits[2 * i + 1];
    r.prediction = predict_label(r.negative_logit, r.positive_logit);
    report.counts.add(r.label, r.prediction);
    report.samples.push_back(std::move(r));
  }
  report.metrics = compute_metrics(report.counts);
  return report;
}

EvaluationReport evaluate(const Checkpoint& checkpoint, std::span<const EvalSample> samples) {
  require_stage(checkpoint, Stage::finetuned);
  if (samples.empty()) throw ConfigError("evaluation needs a non-empty test split");
  EncoderModel model = model_from_checkpoint(checkpoint);
  return evaluate_model(model, samples);
}

void write_report(const EvaluationReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report " + path.string());
  out << report.header().dump() << '\n';
  for (const auto& s : report.samples) {
    out << json{{"id", s.id},
                {"label", s.label},
                {"prediction", s.prediction},
                {"positive_logit", s.positive_logit},
                {"negative_logit", s.negative_logit}}
               .dump()
        << '\n';
  }
  if (!out) throw IoError("failed writing report " + path.string());
}

EvaluationReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report " + path.string());
  EvaluationReport report;
  std::string line;
  try {
    if (!std::getline(in, line)) throw ValidationError("report is empty");
    const json header = json::parse(line);
    report.counts = counts_from_json(header.at("counts"));
    report.metrics = {header.at("accuracy").get<double>(), header.at("precision").get<double>(),
                      header.at("recall").get<double>(), header.at("f1").get<double>()};
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      report.samples.push_back({j.at("id").get<std::string>(), j.at("label").get<int>(), j.at("prediction").get<int>(),
                                j.at("positive_logit").get<double>(), j.at("negative_logit").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ValidationError("malformed report " + path.string() + ": " + e.what());
  }
  return report;
}

json SequenceReport::to_json() const {
  json j;
  j["kind"] = "sequence";
  auto arr = json::array();
  for (const auto& s : steps) {
    json step = {{"id", s.id},
                 {"order", s.order},
                 {"prediction", s.prediction},
                 {"positive_logit", s.positive_logit},
                 {"cam", cam_filename(s.id, s.cam.class_index)}};
    if (s.expert) step["expert"] = *s.expert;
    arr.push_back(std::move(step));
  }
  j["steps"] = std::move(arr);
  if (agreement) {
    j["agreement"] = *agreement;
    j["first_alarm"] = first_alarm ? json(*first_alarm) : json(nullptr);
  }
  return j;
}

SequenceReport evaluate_sequence(EncoderModel& model, std::span<const SequenceItem> items,
                                 const std::optional<std::vector<Label>>& expert_labels) {
  if (expert_labels && expert_labels->size() != items.size()) {
    throw ValidationError("expert labels must align with the sequence");
  }
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (const auto& it : items) {
    if (!it.order) throw ValidationError("sequence item " + it.id + " has no order key");
    if (!it.patch) throw ValidationError("sequence item " + it.id + " has no patch");
  }
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return *items[a].order < *items[b].order; });

  SequenceReport report;
  std::size_t agree = 0;
  for (const std::size_t i : idx) {
    SequenceStep step;
    step.id = items[i].id;
    step.order = *items[i].order;
    step.cam = compute_cam(model, *items[i].patch, -1);
    step.prediction = step.cam.predicted;
    step.positive_logit = step.cam.positive_logit;
    if (expert_labels) {
      step.expert = to_int((*expert_labels)[i]);
      agree += *step.expert == step.prediction ? 1 : 0;
      if (!report.first_alarm && step.prediction == 1) report.first_alarm = report.steps.size() + 1;
    }
    report.steps.push_back(std::move(step));
  }
  if (expert_labels) {
    report.agreement = items.empty() ? 1.0 : static_cast<double>(agree) / static_cast<double>(items.size());
  }
  return report;
}

SequenceReport evaluate_sequence(const Checkpoint& checkpoint, std::span<const SequenceItem> items,
                                 const std::optional<std::vector<Label>>& expert_labels) {
  require_stage(checkpoint, Stage::finetuned);
  EncoderModel model = model_from_checkpoint(checkpoint);
  return evaluate_sequence(model, items, expert_labels);
}

}  // namespace fringe
