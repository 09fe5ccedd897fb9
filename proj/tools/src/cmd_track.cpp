#include <chrono>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "common.hpp"
#include "mkcf/metrics.hpp"
#include "mkcf/results_io.hpp"

namespace mkcf::cli {

namespace {

struct TrackOptions {
  SequenceInput input;
  std::string solver = "mkcfup";
  std::vector<std::string> config;
  std::optional<int> scales;
  std::string out;
};

int run_track(const TrackOptions& o, const std::vector<std::string>& argv) {
  const Sequence seq = o.input.load();
  TrackerConfig config;
  config.solver = parse_solver_kind(o.solver);
  apply_overrides(config, o.config);
  if (o.scales) config.scale_count = *o.scales;
  if (config.mode == ColorMode::kAuto) config.mode = seq.color_mode;

  const auto t0 = std::chrono::steady_clock::now();
  const SequenceRun run = run_sequence(seq.source(), seq.groundtruth.front(), config);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto records = to_records(run);
  const EvaluationResult eval = evaluate_ope(run.boxes, seq.groundtruth);
  bool drift = false;
  for (bool d : run.drift) drift = drift || d;

  nlohmann::json summary = summary_json(eval);
  summary["mean_fps"] = run.mean_fps;
  summary["drift"] = drift;

  const std::filesystem::path out(o.out);
  write_text_atomic(out / "results.csv", format_results_csv(records));
  write_json_atomic(out / "results.json", results_json(records, summary));

  nlohmann::json manifest = base_manifest("track", argv);
  manifest["inputs"] = o.input.describe();
  manifest["sequence"] = {{"name", seq.name},
                          {"frames", seq.size()},
                          {"color_mode", to_string(seq.color_mode)}};
  manifest["config"] = to_json(run.config);
  manifest["timing"] = {{"mean_fps", run.mean_fps}, {"total_seconds", total}, {"frames", seq.size()}};
  manifest["summary"] = {{"precision_at_20", eval.precision_at_20}, {"auc", eval.auc}, {"drift", drift}};
  manifest["outputs"] = {"results.csv", "results.json"};
  manifest["warnings"] = seq.warnings;
  write_manifest(out, manifest);

  std::cout << seq.name << " solver=" << to_string(run.config.solver) << " frames=" << seq.size()
            << " precision@20=" << eval.precision_at_20 << " auc=" << eval.auc
            << " fps=" << run.mean_fps << (drift ? " drift" : "") << "\n";
  for (const auto& w : seq.warnings) std::cerr << "warning: " << w << "\n";
  return drift ? kExitDrift : kExitOk;
}

}  // namespace

void register_track(CLI::App& app, Action& action, const std::vector<std::string>& argv) {
  auto o = std::make_shared<TrackOptions>();
  CLI::App* cmd = app.add_subcommand("track", "Track a sequence and write per-frame results");
  cmd->add_option("--solver", o->solver, "kcf, kcfscale, mkcf or mkcfup")
      ->check(CLI::IsMember({"kcf", "kcfscale", "mkcf", "mkcfup"}))
      ->capture_default_str();
  auto* seq = cmd->add_option("--sequence", o->input.sequence_dir, "OTB-layout sequence directory");
  auto* synth = cmd->add_option("--synth", o->input.synth, "Synthetic preset (translate, zoom, phase, static)");
  seq->excludes(synth);
  cmd->add_option("--seed", o->input.seed, "Seed for synthetic sequences");
  cmd->add_option("--config", o->config, "Config override key=value (repeatable)");
  cmd->add_option("--scales", o->scales, "Number of pyramid scales (odd)");
  cmd->add_option("--out", o->out, "Output directory")->required();
  cmd->callback([&action, o, argv] { action = [o, argv] { return run_track(*o, argv); }; });
}

}  // namespace mkcf::cli
