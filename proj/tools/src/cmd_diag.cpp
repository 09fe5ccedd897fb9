#include <chrono>
#include <cmath>
#include <iostream>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"
#include "mkcf/diagnostics.hpp"
#include "mkcf/results_io.hpp"
#include "mkcf/synth.hpp"

namespace mkcf::cli {

namespace {

struct DiagOptions {
  std::uint64_t seed = 0;
  int count = 0;
  std::string lambda_grid;
  std::string synth = "translate,zoom,phase";
  int samples = 10;
  std::string out;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_lemma1(const DiagOptions& o, const std::vector<std::string>& argv) {
  const auto t0 = std::chrono::steady_clock::now();
  const int count = o.count > 0 ? o.count : 1000;
  const auto draws = lemma1_random_draws(o.seed, count);
  int passes = 0;
  double worst = 0.0;
  nlohmann::json violations = nlohmann::json::array();
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const auto& d = draws[i];
    if (d.check.holds) ++passes;
    else violations.push_back({{"draw", i}, {"lhs", d.check.lhs}, {"rhs", d.check.rhs}});
    if (d.check.rhs > 0.0) worst = std::max(worst, d.check.lhs / d.check.rhs);
  }
  const nlohmann::json report = {{"check", "lemma1"},
                                 {"draws", count},
                                 {"passes", passes},
                                 {"violations", violations},
                                 {"max_lhs_over_rhs", worst},
                                 {"pass", passes == count}};
  const std::filesystem::path out(o.out);
  write_json_atomic(out / "report.json", report);
  nlohmann::json manifest = base_manifest("diag lemma1", argv);
  manifest["seed"] = o.seed;
  manifest["timing"] = {{"mean_fps", nullptr}, {"total_seconds", seconds_since(t0)}};
  manifest["outputs"] = {"report.json"};
  write_manifest(out, manifest);
  std::cout << "lemma1: " << passes << "/" << count << " draws hold (max lhs/rhs " << worst << ")\n";
  return passes == count ? kExitOk : kExitCheckFailed;
}

int run_theorem1(const DiagOptions& o, const std::vector<std::string>& argv) {
  const auto t0 = std::chrono::steady_clock::now();
  const int count = o.count > 0 ? o.count : 200;
  const auto trials = theorem1_random_trials(o.seed, count);
  int checked = 0, positive = 0, contained = 0, vacuous = 0, rejected = 0;
  nlohmann::json failures = nlohmann::json::array();
  nlohmann::json rejections = nlohmann::json::array();
  for (const auto& t : trials) {
    if (!t.error.empty()) {
      ++rejected;
      rejections.push_back({{"instance", t.instance}, {"reason", t.error}});
      continue;
    }
    ++checked;
    if (t.positive) ++positive;
    if (t.contained) ++contained;
    if (t.bounds.vacuous) ++vacuous;
    if (!t.positive || !t.contained) {
      failures.push_back({{"instance", t.instance},
                          {"frame", t.frame},
                          {"iteration", t.iteration},
                          {"kernel", t.kernel},
                          {"d_next", t.d_next},
                          {"lower", t.bounds.lower},
                          {"upper", t.bounds.upper}});
    }
  }
  const bool pass = checked > 0 && positive == checked && contained == checked;
  const nlohmann::json report = {{"check", "theorem1"},
                                 {"instances", count},
                                 {"iterates_checked", checked},
                                 {"positive", positive},
                                 {"contained", contained},
                                 {"vacuous_intervals", vacuous},
                                 {"rejected", rejections},
                                 {"failures", failures},
                                 {"pass", pass}};
  const std::filesystem::path out(o.out);
  write_json_atomic(out / "report.json", report);
  nlohmann::json manifest = base_manifest("diag theorem1", argv);
  manifest["seed"] = o.seed;
  manifest["timing"] = {{"mean_fps", nullptr}, {"total_seconds", seconds_since(t0)}};
  manifest["outputs"] = {"report.json"};
  write_manifest(out, manifest);
  std::cout << "theorem1: " << checked << " iterates from " << count << " instances; positive "
            << positive << ", inside bounds " << contained << ", rejected " << rejected << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

int run_sweep(const DiagOptions& o, const std::vector<std::string>& argv) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> grid =
      o.lambda_grid.empty() ? default_lambda_grid() : parse_real_list(o.lambda_grid);
  std::vector<Sequence> sequences;
  std::vector<std::string> names;
  {
    std::istringstream in(o.synth);
    std::string name;
    while (std::getline(in, name, ',')) {
      sequences.push_back(synth_sequence(synth_preset(name), o.seed));
      names.push_back(name);
    }
  }
  const auto rows = lambda_sweep(grid, sequences, o.samples, o.seed);

  std::ostringstream csv;
  csv.precision(17);
  csv << "lambda,d_bar,delta_max,delta_min,sum_d_mean,samples,failures\n";
  nlohmann::json table = nlohmann::json::array();
  bool monotone = true;
  bool sums_ok = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    csv << r.lambda << "," << r.d_bar << "," << r.delta_max << "," << r.delta_min << ","
        << r.sum_d_mean << "," << r.samples << "," << r.failures << "\n";
    table.push_back({{"lambda", r.lambda},
                     {"d_bar", r.d_bar},
                     {"delta_max", r.delta_max},
                     {"delta_min", r.delta_min},
                     {"sum_d_mean", r.sum_d_mean},
                     {"samples", r.samples},
                     {"failures", r.failures}});
    if (i > 0 && !(r.d_bar >= rows[i - 1].d_bar)) monotone = false;
    if (r.lambda <= 0.05 && !(std::abs(r.sum_d_mean - 1.0) <= 0.15)) sums_ok = false;
  }
  const bool pass = monotone && sums_ok;
  const std::filesystem::path out(o.out);
  write_text_atomic(out / "sweep.csv", csv.str());
  write_json_atomic(out / "report.json", {{"check", "lambda_sweep"},
                                          {"rows", table},
                                          {"sequences", names},
                                          {"d_bar_non_decreasing", monotone},
                                          {"small_lambda_sum_near_one", sums_ok},
                                          {"pass", pass}});
  nlohmann::json manifest = base_manifest("diag sweep", argv);
  manifest["seed"] = o.seed;
  manifest["inputs"] = {{"synth", names}, {"samples_per_sequence", o.samples}, {"lambda_grid", grid}};
  manifest["config"] = to_json(resolve(TrackerConfig{}, 3));
  manifest["timing"] = {{"total_seconds", seconds_since(t0)}};
  manifest["outputs"] = {"sweep.csv", "report.json"};
  write_manifest(out, manifest);

  for (const auto& r : rows) {
    std::cout << "lambda=" << r.lambda << " d_bar=" << r.d_bar << " range=[" << r.delta_min << ", "
              << r.delta_max << "] sum_d=" << r.sum_d_mean << "\n";
  }
  std::cout << "sweep: d_bar non-decreasing " << (monotone ? "yes" : "no")
            << ", small-lambda sum near 1 " << (sums_ok ? "yes" : "no") << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

void register_diag(CLI::App& app, Action& action, const std::vector<std::string>& argv) {
  CLI::App* diag = app.add_subcommand("diag", "Numerical checks of the solver mathematics");
  diag->require_subcommand(1);

  auto add = [&](const std::string& name, const std::string& help, auto run, bool sweep) {
    auto o = std::make_shared<DiagOptions>();
    CLI::App* cmd = diag->add_subcommand(name, help);
    cmd->add_option("--seed", o->seed, "Random seed")->required();
    cmd->add_option("--out", o->out, "Output directory")->required();
    if (sweep) {
      cmd->add_option("--lambda-grid", o->lambda_grid, "Comma-separated lambda values");
      cmd->add_option("--synth", o->synth, "Comma-separated synthetic presets")->capture_default_str();
      cmd->add_option("--samples", o->samples, "Sampled frames per sequence")->capture_default_str();
    } else {
      cmd->add_option("--count", o->count, "Number of random draws or instances");
    }
    cmd->callback([&action, o, argv, run] { action = [o, argv, run] { return run(*o, argv); }; });
  };
  add("lemma1", "Random checks of the multi-kernel norm inequality", run_lemma1, false);
  add("theorem1", "Positivity and bounds of MKCFup weight iterates", run_theorem1, false);
  add("sweep", "Kernel weights versus regularization on synthetic sequences", run_sweep, true);
}

}  // namespace mkcf::cli
