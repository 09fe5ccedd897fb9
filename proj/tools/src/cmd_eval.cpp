#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>

#include "commands.hpp"
#include "common.hpp"
#include "mkcf/metrics.hpp"
#include "mkcf/results_io.hpp"

namespace mkcf::cli {

namespace {

struct EvalOptions {
  std::string results;
  SequenceInput input;
  bool small_move_only = false;
  std::string occlusion;
  std::string out;
};

int run_eval(const EvalOptions& o, const std::vector<std::string>& argv) {
  const Sequence seq = o.input.load();
  const auto records = read_results_csv(o.results);
  std::vector<std::string> warnings = seq.warnings;

  std::vector<BoundingBox> pred;
  for (const auto& r : records) pred.push_back(r.box);
  std::vector<BoundingBox> gt = seq.groundtruth;
  if (pred.size() != gt.size()) {
    const std::size_t n = std::min(pred.size(), gt.size());
    warnings.push_back(std::to_string(pred.size()) + " result records for " +
                       std::to_string(gt.size()) + " ground-truth boxes; truncated to " +
                       std::to_string(n));
    pred.resize(n);
    gt.resize(n);
  }
  if (gt.empty()) raise(ErrorKind::kSequence, "nothing to evaluate");

  std::vector<FrameSpan> spans = seq.occlusions;
  if (!o.occlusion.empty()) {
    std::ifstream in(o.occlusion);
    if (!in) raise(ErrorKind::kIo, "cannot read occlusion file " + o.occlusion);
    spans = parse_spans(in, o.occlusion);
  }
  const SmallMoveReport move = is_small_move(gt, spans);
  const double max_tau = move.adjacent_tau.empty()
                             ? 0.0
                             : *std::max_element(move.adjacent_tau.begin(), move.adjacent_tau.end());

  nlohmann::json manifest = base_manifest("eval", argv);
  manifest["inputs"] = o.input.describe();
  manifest["inputs"]["results"] = std::filesystem::absolute(o.results).string();
  manifest["small_move"] = {{"small_move", move.small_move},
                            {"max_adjacent_tau", max_tau},
                            {"span_tau", move.span_tau},
                            {"filter", o.small_move_only}};
  manifest["warnings"] = warnings;
  manifest["timing"] = {{"mean_fps", nullptr}};

  const std::filesystem::path out(o.out);
  std::cout << seq.name << " small_move=" << (move.small_move ? "yes" : "no")
            << " max_tau=" << max_tau << "\n";
  if (o.small_move_only && !move.small_move) {
    manifest["summary"] = {{"excluded", true}};
    manifest["outputs"] = nlohmann::json::array();
    write_manifest(out, manifest);
    std::cout << seq.name << " excluded by the small-move filter\n";
    return kExitOk;
  }

  const EvaluationResult eval = evaluate_ope(pred, gt);
  nlohmann::json summary = summary_json(eval);
  double fps_frames = 0.0;
  double fps_seconds = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    fps_frames += 1.0;
    fps_seconds += records[i].seconds;
  }
  if (fps_seconds > 0.0) manifest["timing"]["mean_fps"] = fps_frames / fps_seconds;

  write_text_atomic(out / "precision.csv",
                    format_curve_csv(eval.precision_thresholds, eval.precision_curve));
  write_text_atomic(out / "success.csv", format_curve_csv(eval.success_thresholds, eval.success_curve));
  write_json_atomic(out / "summary.json", summary);
  manifest["summary"] = {{"precision_at_20", eval.precision_at_20}, {"auc", eval.auc}};
  manifest["outputs"] = {"precision.csv", "success.csv", "summary.json"};
  write_manifest(out, manifest);

  std::cout << seq.name << " precision@20=" << eval.precision_at_20 << " auc=" << eval.auc << "\n";
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return kExitOk;
}

}  // namespace

void register_eval(CLI::App& app, Action& action, const std::vector<std::string>& argv) {
  auto o = std::make_shared<EvalOptions>();
  CLI::App* cmd = app.add_subcommand("eval", "Score a results file against ground truth (OPE)");
  cmd->add_option("--results", o->results, "Results CSV written by track")->required();
  auto* seq = cmd->add_option("--sequence", o->input.sequence_dir, "OTB-layout sequence directory");
  auto* synth = cmd->add_option("--synth", o->input.synth, "Synthetic preset");
  seq->excludes(synth);
  cmd->add_option("--seed", o->input.seed, "Seed for synthetic sequences");
  cmd->add_flag("--small-move-only", o->small_move_only, "Skip scoring for large-move sequences");
  cmd->add_option("--occlusion", o->occlusion, "Occlusion spans file (start,end per line)");
  cmd->add_option("--out", o->out, "Output directory")->required();
  cmd->callback([&action, o, argv] { action = [o, argv] { return run_eval(*o, argv); }; });
}

}  // namespace mkcf::cli
