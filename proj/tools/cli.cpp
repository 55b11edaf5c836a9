#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fringe/cam.hpp"
#include "fringe/checkpoint.hpp"
#include "fringe/config.hpp"
#include "fringe/error.hpp"
#include "fringe/evaluate.hpp"
#include "fringe/manifest.hpp"
#include "fringe/patch_io.hpp"
#include "fringe/synthetic.hpp"
#include "fringe/train.hpp"
#include "fringe/training_log.hpp"

namespace fringe::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Context {
  fs::path workdir;
  std::optional<std::string> config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  std::ostream& out;
  std::ostream& err;

  fs::path resolve(const std::string& p) const { return fs::path(p).is_absolute() ? fs::path(p) : workdir / p; }
};

/// Turns leftover "--section.key value" / "--section.key=value" tokens into pairs.
std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& extras) {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.size() <= 2) throw ValidationError("unexpected argument '" + tok + "'");
    std::string key = tok.substr(2);
    const auto eq = key.find('=');
    if (eq != std::string::npos) {
      out.emplace_back(key.substr(0, eq), key.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) throw ValidationError("option '" + tok + "' needs a value");
    out.emplace_back(key, extras[++i]);
  }
  return out;
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("FRINGE_SEED must be a non-negative integer, got '" + text + "'");
  }
}

/// Config file, then FRINGE_SEED, then --section.key flags.
RunConfig build_config(const Context& ctx) {
  json j = json::object();
  if (ctx.config_path) {
    const fs::path p = ctx.resolve(*ctx.config_path);
    std::ifstream in(p);
    if (!in) throw IoError("cannot open config " + p.string());
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ValidationError("config " + p.string() + " is not valid JSON: " + e.what());
    }
  }
  if (const char* env = std::getenv("FRINGE_SEED"); env && *env) j["seed"] = parse_seed(env);
  for (const auto& [k, v] : ctx.overrides) apply_override(j, k, v);
  RunConfig c = run_config_from_json(j);
  c.validate(ctx.workdir);
  return c.resolved();
}

fs::path make_run_dir(const Context& ctx, std::uint64_t seed) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream name;
  name << std::put_time(&tm, "%Y%m%dT%H%M%SZ") << "_s" << seed;
  const fs::path base = ctx.workdir / "runs";
  fs::path dir = base / name.str();
  for (int k = 1; fs::exists(dir); ++k) dir = base / (name.str() + "-" + std::to_string(k));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create run directory " + dir.string() + ": " + ec.message());
  return dir;
}

fs::path start_run(const Context& ctx, const RunConfig& config) {
  const fs::path dir = make_run_dir(ctx, config.seed);
  save_run_config(config, dir / "config.json");
  ctx.out << "run directory: " << dir.string() << '\n';
  return dir;
}

DatasetManifest open_manifest(const Context& ctx, const RunConfig& config) {
  if (config.data.manifest.empty()) throw ConfigError("no dataset: set data.manifest (e.g. --data.manifest data/manifest.tsv)");
  return load_manifest(ctx.resolve(config.data.manifest));
}

std::string sample_id(const ManifestEntry& e) {
  return fs::path(e.path).stem().string();
}

Checkpoint open_checkpoint(const Context& ctx, const std::string& path) {
  if (path.empty()) throw ValidationError("--checkpoint is required");
  return load_checkpoint(ctx.resolve(path));
}

void check_channels(const Checkpoint& ckpt, const RunConfig& config) {
  const EncoderConfig enc = encoder_config_from_json(ckpt.config);
  if (enc.input_channels != channel_count(config.data.channels)) {
    throw ValidationError("checkpoint expects " + std::to_string(enc.input_channels) + " input channels but data.channels is " +
                          to_string(config.data.channels));
  }
}

/// Log writer plus per-epoch checkpoints under <run>/checkpoints.
TrainHooks file_hooks(const fs::path& run, TrainingLogWriter& log, std::uint64_t stop_after) {
  TrainHooks hooks;
  hooks.stop_after_steps = stop_after;
  hooks.on_step = [&log](const LogRecord& r) { log.write(r); };
  hooks.on_epoch = [run](const Checkpoint& ckpt, const TrainState& state, bool best) {
    std::ostringstream name;
    name << "epoch_" << std::setw(3) << std::setfill('0') << state.epoch << ".fckp";
    save_checkpoint(run / "checkpoints" / name.str(), ckpt);
    if (best) save_checkpoint(run / "checkpoints" / "best.fckp", ckpt);
  };
  return hooks;
}

void report_training(const Context& ctx, const TrainResult& result, const fs::path& ckpt_path) {
  save_checkpoint(ckpt_path, result.checkpoint);
  ctx.out << "steps: " << result.log.size() << " (global step " << result.state.global_step << ")\n";
  if (!result.log.empty()) ctx.out << "final loss: " << result.log.back().loss << '\n';
  ctx.out << (result.state.completed ? "checkpoint: " : "partial checkpoint: ") << ckpt_path.string() << '\n';
}

std::vector<InterferogramPatch> unlabeled_train(const Context& ctx, const RunConfig& config) {
  const DatasetManifest manifest = open_manifest(ctx, config);
  auto loaded = load_patches(manifest, manifest.split(Split::train), config.data.channels);
  std::vector<InterferogramPatch> out;
  out.reserve(loaded.size());
  for (auto& l : loaded) out.push_back(std::move(l.patch));
  return out;
}

std::vector<LabeledPatch> labeled_train(const Context& ctx, const RunConfig& config) {
  const DatasetManifest manifest = open_manifest(ctx, config);
  std::vector<ManifestEntry> labeled;
  for (const auto& e : manifest.split(Split::train)) {
    if (e.label) labeled.push_back(e);
  }
  auto loaded = load_patches(manifest, labeled, config.data.channels);
  std::vector<LabeledPatch> out;
  out.reserve(loaded.size());
  for (auto& l : loaded) out.push_back({std::move(l.patch), *l.entry.label});
  return out;
}

fs::path stage_checkpoint_path(const fs::path& run, const TrainResult& r, const char* name) {
  return run / (r.state.completed ? std::string(name) + ".fckp" : std::string("partial.fckp"));
}

int cmd_pretrain(const Context& ctx, std::uint64_t stop_after) {
  RunConfig config = build_config(ctx);
  if (config.encoder.init == WeightInit::imported) config.encoder.import_path = ctx.resolve(config.encoder.import_path).string();
  const auto data = unlabeled_train(ctx, config);
  const fs::path run = start_run(ctx, config);
  TrainingLogWriter log(run / "train_log.jsonl");
  const TrainResult r =
      pretrain(data, config.encoder, config.augment, config.loss, config.pretrain, file_hooks(run, log, stop_after));
  report_training(ctx, r, stage_checkpoint_path(run, r, "pretrained"));
  return kOk;
}

int cmd_finetune(const Context& ctx, const std::string& checkpoint, std::uint64_t stop_after) {
  const RunConfig config = build_config(ctx);
  const Checkpoint ckpt = open_checkpoint(ctx, checkpoint);
  require_stage(ckpt, Stage::pretrained);
  check_channels(ckpt, config);
  const auto data = labeled_train(ctx, config);
  const fs::path run = start_run(ctx, config);
  TrainingLogWriter log(run / "train_log.jsonl");
  const TrainResult r = finetune(ckpt, data, config.finetune, file_hooks(run, log, stop_after));
  report_training(ctx, r, stage_checkpoint_path(run, r, "finetuned"));
  return kOk;
}

int cmd_resume(const Context& ctx, const std::string& checkpoint, const std::string& stage, std::uint64_t stop_after) {
  const RunConfig config = build_config(ctx);
  const Checkpoint ckpt = open_checkpoint(ctx, checkpoint);
  check_channels(ckpt, config);
  const std::string kind = stage.empty() ? ckpt.metadata.value("stage_kind", "") : stage;
  if (kind != "pretrain" && kind != "finetune") {
    throw ValidationError("--stage must be 'pretrain' or 'finetune'");
  }
  const fs::path run = start_run(ctx, config);
  TrainingLogWriter log(run / "train_log.jsonl");
  const TrainHooks hooks = file_hooks(run, log, stop_after);
  TrainResult r;
  if (kind == "pretrain") {
    r = resume_pretrain(ckpt, unlabeled_train(ctx, config), config.pretrain, hooks);
    report_training(ctx, r, stage_checkpoint_path(run, r, "pretrained"));
  } else {
    r = resume_finetune(ckpt, labeled_train(ctx, config), config.finetune, hooks);
    report_training(ctx, r, stage_checkpoint_path(run, r, "finetuned"));
  }
  return kOk;
}

int cmd_evaluate(const Context& ctx, const std::string& checkpoint, const std::string& report_name) {
  const RunConfig config = build_config(ctx);
  const Checkpoint ckpt = open_checkpoint(ctx, checkpoint);
  require_stage(ckpt, Stage::finetuned);
  check_channels(ckpt, config);
  const DatasetManifest manifest = open_manifest(ctx, config);
  const auto entries = manifest.split(Split::test);
  if (entries.empty()) throw ConfigError("the manifest has no test split to evaluate");
  for (const auto& e : entries) {
    if (!e.label) throw ValidationError("test entry " + e.path + " has no label");
  }
  const auto loaded = load_patches(manifest, entries, config.data.channels);
  std::vector<EvalSample> samples;
  for (const auto& l : loaded) samples.push_back({sample_id(l.entry), &l.patch, *l.entry.label});

  const fs::path run = start_run(ctx, config);
  EncoderModel model = model_from_checkpoint(ckpt);
  const EvaluationReport report = evaluate_model(model, samples);
  const fs::path report_path = run / report_name;
  write_report(report, report_path);
  if (config.evaluate.write_cams) {
    for (const auto& s : samples) write_cam(run / "cams", s.id, compute_cam(model, *s.patch, config.evaluate.cam_class));
  }
  const auto& c = report.counts;
  const auto& m = report.metrics;
  ctx.out << std::fixed << std::setprecision(4) << "n=" << c.total() << " TP=" << c.tp << " FP=" << c.fp
          << " TN=" << c.tn << " FN=" << c.fn << "\nACC=" << m.accuracy << " P=" << m.precision << " R=" << m.recall
          << " F1=" << m.f1 << "\nreport: " << report_path.string() << '\n';
  return kOk;
}

int cmd_monitor(const Context& ctx, const std::string& checkpoint, bool expert) {
  const RunConfig config = build_config(ctx);
  const Checkpoint ckpt = open_checkpoint(ctx, checkpoint);
  require_stage(ckpt, Stage::finetuned);
  check_channels(ckpt, config);
  const DatasetManifest manifest = open_manifest(ctx, config);
  for (const auto& e : manifest.entries()) {
    if (!e.order) throw ValidationError("sequence entry " + e.path + " has no order key");
  }
  const auto loaded = load_patches(manifest, manifest.entries(), config.data.channels);
  std::vector<SequenceItem> items;
  std::optional<std::vector<Label>> labels;
  if (expert) labels.emplace();
  for (const auto& l : loaded) {
    items.push_back({sample_id(l.entry), l.entry.order, &l.patch});
    if (expert) {
      if (!l.entry.label) throw ValidationError("--expert needs a label on every entry; " + l.entry.path + " has none");
      labels->push_back(*l.entry.label);
    }
  }
  const fs::path run = start_run(ctx, config);
  EncoderModel model = model_from_checkpoint(ckpt);
  const SequenceReport report = evaluate_sequence(model, items, labels);
  for (const auto& s : report.steps) write_cam(run / "cams", s.id, s.cam);
  std::ofstream out(run / "sequence.json");
  out << report.to_json().dump(2) << '\n';
  if (!out) throw IoError("cannot write sequence report");

  ctx.out << "predictions:";
  for (const auto& s : report.steps) ctx.out << ' ' << s.prediction;
  ctx.out << '\n';
  if (report.agreement) {
    ctx.out << "agreement: " << *report.agreement << '\n';
    ctx.out << "first alarm: " << (report.first_alarm ? std::to_string(*report.first_alarm) : std::string("none")) << '\n';
  }
  ctx.out << "report: " << (run / "sequence.json").string() << '\n';
  return kOk;
}

InterferogramPatch read_any_patch(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("input not found: " + path.string());
  return path.extension() == ".iph" ? read_patch(path) : patch_from_image(path);
}

int cmd_cam(const Context& ctx, const std::string& checkpoint, const std::string& input, int class_index) {
  const RunConfig config = build_config(ctx);
  const Checkpoint ckpt = open_checkpoint(ctx, checkpoint);
  require_stage(ckpt, Stage::finetuned);
  check_channels(ckpt, config);
  if (class_index < -1 || class_index > 1) throw ValidationError("--class must be 0, 1 or -1");
  const fs::path in = ctx.resolve(input);
  const InterferogramPatch patch = render_channels(read_any_patch(in), config.data.channels);
  const fs::path run = start_run(ctx, config);
  EncoderModel model = model_from_checkpoint(ckpt);
  const CamResult cam = compute_cam(model, patch, class_index);
  const std::string id = in.stem().string();
  write_cam(run, id, cam);
  ctx.out << "prediction: " << cam.predicted << "\ncam: " << (run / cam_filename(id, cam.class_index)).string() << '\n';
  return kOk;
}

struct SynthArgs {
  std::size_t n = 0;
  std::size_t test_n = 0;
  int side = 32;
  double fraction = 0.5;
  std::optional<double> test_fraction;
  std::uint64_t seed = 0;
  double noise = 0.3;
  double min_cycles = 2.0;
  double max_cycles = 4.0;
  double ramp_cycles = 1.0;
  bool sequence = false;
  std::string out;
};

json truth_to_json(const std::string& id, const SyntheticPatch& p, Split split) {
  const FringeTruth& t = p.truth;
  return {{"id", id},
          {"label", to_int(p.labeled.label)},
          {"split", to_string(split)},
          {"has_bullseye", t.has_bullseye},
          {"center_row", t.center_row},
          {"center_col", t.center_col},
          {"sigma", t.sigma},
          {"amplitude", t.amplitude},
          {"fringe_radius", t.fringe_radius}};
}

int cmd_synth(const Context& ctx, const SynthArgs& a) {
  if (a.out.empty()) throw ValidationError("--out is required");
  SyntheticFringeSpec spec;
  spec.n_samples = a.n;
  spec.side = a.side;
  spec.deformation_fraction = a.fraction;
  spec.seed = a.seed;
  spec.noise_sigma = a.noise;
  spec.min_cycles = a.min_cycles;
  spec.max_cycles = a.max_cycles;
  spec.ramp_max_cycles = a.ramp_cycles;
  spec.validate();

  const fs::path out = ctx.resolve(a.out);
  std::error_code ec;
  fs::create_directories(out / "patches", ec);
  if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());

  std::vector<ManifestEntry> entries;
  std::ofstream truth(out / "truth.jsonl");
  if (!truth) throw IoError("cannot write " + (out / "truth.jsonl").string());

  const auto emit = [&](std::vector<SyntheticPatch> set, Split split) {
    if (a.sequence) {
      // Chronological monitoring set: every negative first, then every positive.
      std::stable_partition(set.begin(), set.end(),
                            [](const SyntheticPatch& p) { return p.labeled.label == Label::non_deformation; });
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
      const std::string id = set[i].labeled.patch.meta().source_id;
      const std::string rel = "patches/" + id + ".iph";
      write_patch(out / rel, set[i].labeled.patch);
      ManifestEntry e{rel, set[i].labeled.label, split, std::nullopt};
      if (a.sequence) e.order = static_cast<long long>(entries.size());
      entries.push_back(std::move(e));
      truth << truth_to_json(id, set[i], split).dump() << '\n';
    }
  };

  emit(generate_synthetic(spec), a.sequence ? Split::test : Split::train);
  if (a.test_n > 0) {
    SyntheticFringeSpec held = spec;
    held.n_samples = a.test_n;
    held.deformation_fraction = a.test_fraction.value_or(a.fraction);
    held.seed = derive_seed(a.seed, {label_key("held-out")});
    held.validate();
    emit(generate_synthetic(held), Split::test);
  }
  if (!truth) throw IoError("failed writing truth file");
  const DatasetManifest manifest(entries, out);
  save_manifest(manifest, out / "manifest.tsv");

  for (const Split s : {Split::train, Split::test}) {
    const ManifestStats st = tally(manifest.split(s));
    if (st.n_positive + st.n_negative + st.n_unlabeled == 0) continue;
    ctx.out << to_string(s) << ": " << st.n_positive << " positive, " << st.n_negative << " negative, "
            << st.n_unlabeled << " unlabeled\n";
  }
  ctx.out << "manifest: " << (out / "manifest.tsv").string() << '\n';
  return kOk;
}

int cmd_convert(const Context& ctx, const std::string& input, const std::string& output) {
  if (input.empty() || output.empty()) throw ValidationError("--input and --out are required");
  const InterferogramPatch patch = patch_from_image(ctx.resolve(input));
  const fs::path out = ctx.resolve(output);
  if (out.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(out.parent_path(), ec);
    if (ec) throw IoError("cannot create " + out.parent_path().string());
  }
  write_patch(out, patch);
  ctx.out << "wrote " << out.string() << " (" << patch.side() << "x" << patch.side() << ")\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contrastive pretraining and linear evaluation for wrapped-interferogram patches"};
  app.require_subcommand(1);
  std::string workdir = ".";
  std::string config_path;
  app.add_option("--workdir", workdir, "Directory every relative path is resolved against");

  const auto with_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Run configuration (JSON)");
    sub->allow_extras();
    sub->footer("Any configuration key can be set with --section.key value, e.g. --pretrain.epochs 5.");
  };

  std::string checkpoint, input, output, stage, report_name = "report.jsonl";
  std::uint64_t stop_after = 0;
  int class_index = -1;
  bool expert = false;
  SynthArgs synth;

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
  synth_cmd->add_option("--n", synth.n, "Number of patches")->required();
  synth_cmd->add_option("--side", synth.side, "Patch side in pixels");
  synth_cmd->add_option("--fraction", synth.fraction, "Fraction of deformation patches");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--test-n", synth.test_n, "Additional held-out patches (test split)");
  synth_cmd->add_option("--test-fraction", synth.test_fraction, "Deformation fraction of the held-out set");
  synth_cmd->add_option("--noise", synth.noise, "Phase noise sigma (radians)");
  synth_cmd->add_option("--min-cycles", synth.min_cycles, "Smallest bullseye amplitude in fringe cycles");
  synth_cmd->add_option("--max-cycles", synth.max_cycles, "Largest bullseye amplitude in fringe cycles");
  synth_cmd->add_option("--ramp-cycles", synth.ramp_cycles, "Largest orbital ramp across the patch, in cycles");
  synth_cmd->add_flag("--sequence", synth.sequence, "Write an ordered monitoring sequence (negatives first)");

  auto* convert_cmd = app.add_subcommand("convert", "Convert a grayscale image to a patch file");
  convert_cmd->add_option("--input", input, "Square grayscale image")->required();
  convert_cmd->add_option("--out", output, "Output .iph file")->required();

  auto* pretrain_cmd = app.add_subcommand("pretrain", "Contrastive pretraining on the training split");
  with_config(pretrain_cmd);
  pretrain_cmd->add_option("--stop-after-steps", stop_after, "Stop after this many steps (resumable)");

  auto* finetune_cmd = app.add_subcommand("finetune", "Train the linear classifier on a pretrained encoder");
  with_config(finetune_cmd);
  finetune_cmd->add_option("--checkpoint", checkpoint, "Pretrained checkpoint")->required();
  finetune_cmd->add_option("--stop-after-steps", stop_after, "Stop after this many steps (resumable)");

  auto* resume_cmd = app.add_subcommand("resume", "Continue an interrupted pretraining or fine-tuning run");
  with_config(resume_cmd);
  resume_cmd->add_option("--checkpoint", checkpoint, "Partial checkpoint")->required();
  resume_cmd->add_option("--stage", stage, "pretrain or finetune (default: the checkpoint's own stage)");
  resume_cmd->add_option("--stop-after-steps", stop_after, "Stop after this many global steps");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a fine-tuned checkpoint on the test split");
  with_config(evaluate_cmd);
  evaluate_cmd->add_option("--checkpoint", checkpoint, "Fine-tuned checkpoint")->required();
  evaluate_cmd->add_option("--report", report_name, "Report file name inside the run directory");

  auto* monitor_cmd = app.add_subcommand("monitor", "Classify an ordered sequence and export CAMs");
  with_config(monitor_cmd);
  monitor_cmd->add_option("--checkpoint", checkpoint, "Fine-tuned checkpoint")->required();
  monitor_cmd->add_flag("--expert", expert, "Treat manifest labels as expert labels (agreement, first alarm)");

  auto* cam_cmd = app.add_subcommand("cam", "Write the class activation map of one patch");
  with_config(cam_cmd);
  cam_cmd->add_option("--checkpoint", checkpoint, "Fine-tuned checkpoint")->required();
  cam_cmd->add_option("--input", input, "Patch file (.iph) or grayscale image")->required();
  cam_cmd->add_option("--class", class_index, "Class index 0 or 1; -1 (default) uses the predicted class");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    Context ctx{fs::path(workdir), std::nullopt, parse_overrides(sub->remaining()), out, err};
    if (!config_path.empty()) ctx.config_path = config_path;
    if (sub == synth_cmd || sub == convert_cmd) {
      if (!ctx.overrides.empty()) throw ValidationError("unexpected argument --" + ctx.overrides.front().first);
    }
    if (sub == synth_cmd) return cmd_synth(ctx, synth);
    if (sub == convert_cmd) return cmd_convert(ctx, input, output);
    if (sub == pretrain_cmd) return cmd_pretrain(ctx, stop_after);
    if (sub == finetune_cmd) return cmd_finetune(ctx, checkpoint, stop_after);
    if (sub == resume_cmd) return cmd_resume(ctx, checkpoint, stage, stop_after);
    if (sub == evaluate_cmd) return cmd_evaluate(ctx, checkpoint, report_name);
    if (sub == monitor_cmd) return cmd_monitor(ctx, checkpoint, expert);
    return cmd_cam(ctx, checkpoint, input, class_index);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const StageError& e) {
    err << "stage error: " << e.what() << '\n';
    return kInvalid;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kInvalid;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace fringe::cli
