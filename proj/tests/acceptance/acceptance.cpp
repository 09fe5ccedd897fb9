// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
//
// Usage: mkcf_acceptance [path/to/mkcf]

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mkcf/diagnostics.hpp"
#include "mkcf/metrics.hpp"
#include "mkcf/synth.hpp"
#include "mkcf/tracker.hpp"
#include "oracles.hpp"

namespace {

using namespace mkcf;
using testing::Rng;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

std::vector<Eigen::MatrixXd> grams(const std::vector<KernelCorrelation>& ks) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& k : ks) out.push_back(testing::dense_circulant(k.plane));
  return out;
}

Eigen::VectorXd alpha_of(const ComplexPlane& s) { return testing::vec(idft2(s)); }

double rel_scalar(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Exact minimizer of the dense objective over d = (t, 1 - t), t in [0, 1].
double dense_simplex_weight(const std::vector<Eigen::MatrixXd>& k, const Eigen::VectorXd& a,
                            const Eigen::VectorXd& y, double lambda_o) {
  const Eigen::VectorXd u0 = k[0] * a;
  const Eigen::VectorXd u1 = k[1] * a;
  const Eigen::VectorXd diff = u0 - u1;
  const double curvature = diff.squaredNorm();
  const double numer = diff.dot(y - u1) - 0.5 * lambda_o * a.dot(diff);
  if (curvature <= 0.0) return 0.5;
  return std::clamp(numer / curvature, 0.0, 1.0);
}

// --------------------------------------------------------------------------

Outcome criterion_oracle_equivalence() {
  const auto t0 = Clock::now();
  Rng rng(1001);
  std::uniform_int_distribution<int> side(3, 4);
  std::uniform_int_distribution<int> chans(1, 3);
  std::uniform_real_distribution<double> log_lambda(-4.0, 0.0);
  std::uniform_real_distribution<double> sig(0.3, 1.0);
  double worst = 0.0;
  std::string worst_path;
  auto track = [&](double err, const char* path) {
    if (!(err <= worst)) {
      worst = err;
      worst_path = path;
    }
  };

  const int instances = 120;
  for (int i = 0; i < instances; ++i) {
    const int w = side(rng);
    const int h = side(rng);
    const int c = chans(rng);
    const double lambda_o = std::pow(10.0, log_lambda(rng));
    const Labels labels = gaussian_labels(w, h, 0.2, 2);
    const Eigen::VectorXd y = testing::vec(labels.y);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(w * h, w * h);

    // Kernel rows against explicit shift loops.
    const FeatureMap x0 = testing::random_features(rng, w, h, c);
    const FeatureMap x1 = testing::random_features(rng, w, h, c);
    const FeatureMap z0 = testing::random_features(rng, w, h, c);
    const FeatureMap z1 = testing::random_features(rng, w, h, c);
    const double s0 = sig(rng);
    const double s1 = sig(rng);
    const std::vector<KernelCorrelation> ks{gaussian_correlation(x0, x0, s0), gaussian_correlation(x1, x1, s1)};
    const std::vector<KernelCorrelation> kz{gaussian_correlation(x0, z0, s0), gaussian_correlation(x1, z1, s1)};
    track(testing::rel_err(ks[0].plane, testing::brute_kernel(x0, x0, s0)), "kernel");
    track(testing::rel_err(kz[1].plane, testing::brute_kernel(x1, z1, s1)), "kernel");
    const auto k = grams(ks);
    const auto kt = grams(kz);

    // KCF.
    const Eigen::VectorXd kcf_ref = (k[0] + lambda_o * eye).fullPivLu().solve(y);
    track(testing::rel_err(alpha_of(kcf_train(ks[0], labels, lambda_o)), kcf_ref), "kcf");

    // MKCF alpha and d steps.
    std::uniform_real_distribution<double> u(0.05, 0.95);
    const double t = u(rng);
    const std::vector<double> d{t, 1.0 - t};
    const ComplexPlane a_hat = mkcf_alpha_step(ks, d, labels, lambda_o);
    const Eigen::VectorXd a_ref = (d[0] * k[0] + d[1] * k[1] + lambda_o * eye).fullPivLu().solve(y);
    track(testing::rel_err(alpha_of(a_hat), a_ref), "mkcf-alpha");
    const auto d_step = mkcf_d_step(ks, a_hat, labels, lambda_o);
    const double t_ref = dense_simplex_weight(k, alpha_of(a_hat), y, lambda_o);
    track(std::abs(d_step[0] - t_ref) / std::max(1.0, t_ref), "mkcf-d");
    track(rel_scalar(spectral_objective(ks, a_hat, d, labels, lambda_o),
                     testing::dense_objective(k, alpha_of(a_hat), d, y, lambda_o)),
          "objective");

    // Detection response.
    const ResponseMap r = detect(kz, a_hat, d);
    const Eigen::VectorXd resp = (d[0] * kt[0] + d[1] * kt[1]) * alpha_of(a_hat);
    track(testing::rel_err(testing::vec(r.plane), resp), "detect");

    // MKCFup, two frames.
    SolverConfig cfg;
    cfg.kernel_count = 2;
    cfg.lambda_o = lambda_o;
    cfg.gamma = {u(rng), u(rng)};
    const auto next = testing::random_autocorrelations(rng, w, h, 2, c);
    const auto ref = testing::dense_mkcfup({k, grams(next)}, testing::vec(labels.y_c), cfg);
    SolverState s = mkcfup_init(ks, labels, cfg);
    track(testing::rel_err(alpha_of(s.alpha_spectrum), ref[0].alpha), "mkcfup-alpha");
    s = mkcfup_update(s, next, labels, cfg);
    track(testing::rel_err(alpha_of(s.alpha_spectrum), ref[1].alpha), "mkcfup-alpha");
    for (int m = 0; m < 2; ++m) track(rel_scalar(s.d[m], ref[1].d[m]), "mkcfup-d");
  }
  const double secs = seconds_since(t0);
  const bool pass = worst <= 1e-8 && secs < 10.0;
  return {pass, std::to_string(instances) + " instances, max rel err " + fmt(worst) + " (" + worst_path +
                    "), " + fmt(secs) + " s"};
}

Outcome criterion_lemma1() {
  const auto t0 = Clock::now();
  const auto draws = lemma1_random_draws(2002, 1000);
  int violations = 0;
  int per_m[6] = {0, 0, 0, 0, 0, 0};
  for (const auto& d : draws) {
    if (!(d.check.lhs <= d.check.rhs + 1e-10)) ++violations;
    if (d.kernels >= 0 && d.kernels < 6) ++per_m[d.kernels];
  }
  const double secs = seconds_since(t0);
  const bool covered = per_m[2] > 0 && per_m[3] > 0 && per_m[5] > 0;
  const bool pass = draws.size() >= 1000 && violations == 0 && covered && secs < 5.0;
  return {pass, std::to_string(draws.size()) + " draws (M=2/3/5: " + std::to_string(per_m[2]) + "/" +
                    std::to_string(per_m[3]) + "/" + std::to_string(per_m[5]) + "), " +
                    std::to_string(violations) + " violations, " + fmt(secs) + " s"};
}

Outcome criterion_theorem1() {
  const auto t0 = Clock::now();
  const auto trials = theorem1_random_trials(3003, 200);
  int checked = 0, positive = 0, inside = 0, vacuous = 0, rejected = 0;
  for (const auto& t : trials) {
    if (!t.error.empty()) {
      ++rejected;
      continue;
    }
    ++checked;
    if (t.positive) ++positive;
    if (t.bounds.lower < t.d_next && t.d_next < t.bounds.upper) ++inside;
    if (t.bounds.vacuous) ++vacuous;
  }
  const double secs = seconds_since(t0);
  const bool pass = checked >= 200 && positive == checked && inside == checked && secs < 30.0;
  return {pass, std::to_string(checked) + " iterates, " + std::to_string(positive) + " positive, " +
                    std::to_string(inside) + " strictly inside, " + std::to_string(vacuous) +
                    " vacuous, " + std::to_string(rejected) + " rejected, " + fmt(secs) + " s"};
}

Outcome criterion_recursion_vs_batch() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  const int seeds = 60;
  for (int seed = 0; seed < seeds; ++seed) {
    Rng rng(4000 + seed);
    std::uniform_real_distribution<double> g(0.02, 0.5);
    SolverConfig cfg;
    cfg.kernel_count = 2;
    cfg.lambda_o = 1e-2;
    cfg.gamma = {g(rng), g(rng)};
    const Labels labels = gaussian_labels(4, 4, 0.15, 2);
    const Eigen::VectorXd yc = testing::vec(labels.y_c);
    std::vector<std::vector<Eigen::MatrixXd>> dense;
    std::vector<std::vector<double>> committed;
    SolverState s;
    for (int p = 0; p < 3; ++p) {
      const auto ks = testing::random_autocorrelations(rng, 4, 4, 2, 1 + seed % 3);
      dense.push_back(grams(ks));
      s = p == 0 ? mkcfup_init(ks, labels, cfg) : mkcfup_update(s, ks, labels, cfg);
      committed.push_back(s.d);
    }
    const auto ref = testing::dense_mkcfup(dense, yc, cfg);
    const auto& last = ref.back();
    for (int m = 0; m < 2; ++m) {
      worst = std::max(worst, testing::rel_err(testing::vec(idft2(s.alpha_numerator[m])), last.numerators[m] * yc));
      const RealPlane row = testing::plane_from(last.denominators[m].row(0).transpose(), 4, 4);
      const ComplexPlane den = circulant_spectrum(row);
      double scale = 0.0;
      double diff = 0.0;
      for (std::size_t i = 0; i < den.size(); ++i) {
        scale = std::max(scale, std::abs(den[i]));
        diff = std::max(diff, std::abs(s.alpha_denominator[m][i] - den[i]));
      }
      worst = std::max(worst, diff / scale);
      worst = std::max(worst, rel_scalar(s.weight_numerator[m], last.weight_numerator[m]));
      worst = std::max(worst, rel_scalar(s.weight_denominator[m], last.weight_denominator[m]));
    }
    const Eigen::VectorXd batch = testing::batch_alpha(dense, committed, yc, cfg.gamma, cfg.lambda());
    worst = std::max(worst, testing::rel_err(alpha_of(s.alpha_spectrum), batch));
  }
  const bool pass = worst <= 1e-8;
  return {pass, std::to_string(seeds) + " seeds x 3 frames at 4x4, max rel err " + fmt(worst) + ", " +
                    fmt(seconds_since(t0)) + " s"};
}

Outcome criterion_lambda_sweep() {
  const auto t0 = Clock::now();
  std::vector<Sequence> seqs;
  for (const char* name : {"translate", "zoom", "phase"}) seqs.push_back(synth_sequence(synth_preset(name), 1));
  const auto grid = default_lambda_grid();
  const auto rows = lambda_sweep(grid, seqs, 10, 1);
  bool monotone = true;
  bool sums = true;
  std::string table;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && !(rows[i].d_bar >= rows[i - 1].d_bar)) monotone = false;
    if (rows[i].lambda <= 0.05 && !(std::abs(rows[i].sum_d_mean - 1.0) <= 0.15)) sums = false;
    table += (i ? " " : "") + fmt(rows[i].lambda) + ":" + fmt(rows[i].d_bar);
  }
  const double secs = seconds_since(t0);
  const bool pass = rows.size() == 8 && monotone && sums && secs < 300.0;
  return {pass, std::string("d_bar non-decreasing ") + (monotone ? "yes" : "no") + ", small-lambda sum near 1 " +
                    (sums ? "yes" : "no") + ", lambda:d_bar [" + table + "], " + fmt(secs) + " s"};
}

Outcome criterion_synthetic_tracking() {
  const auto t0 = Clock::now();
  const Sequence tr = synth_sequence(synth_preset("translate"), 1);
  const SequenceRun a = run_sequence(tr.source(), tr.groundtruth[0], TrackerConfig{});
  const SequenceRun b = run_sequence(tr.source(), tr.groundtruth[0], TrackerConfig{});
  int good = 0;
  for (int i = 0; i < tr.size(); ++i) good += iou(a.boxes[i], tr.groundtruth[i]) > 0.5;
  const double frac = double(good) / tr.size();

  const Sequence zm = synth_sequence(synth_preset("zoom"), 1);
  const SequenceRun z1 = run_sequence(zm.source(), zm.groundtruth[0], TrackerConfig{});
  const SequenceRun z2 = run_sequence(zm.source(), zm.groundtruth[0], TrackerConfig{});
  const double truth = zm.groundtruth.back().w / zm.groundtruth.front().w;
  const double steps = std::log(z1.scales.back() / truth) / std::log(TrackerConfig{}.scale_step);

  const bool deterministic = a.boxes == b.boxes && z1.boxes == z2.boxes && z1.scales == z2.scales;
  const bool pass = frac >= 0.95 && std::abs(steps) <= 1.0 + 1e-9 && deterministic;
  return {pass, "translate IoU>0.5 on " + fmt(100.0 * frac) + "% of frames, zoom final scale " +
                    fmt(z1.scales.back()) + " vs truth " + fmt(truth) + " (" + fmt(steps) +
                    " steps), deterministic " + (deterministic ? "yes" : "no") + ", " +
                    fmt(seconds_since(t0)) + " s"};
}

Outcome criterion_multi_kernel_benefit() {
  const auto t0 = Clock::now();
  double up = 0.0, hog = 0.0, color = 0.0;
  const int seeds = 10;
  for (int seed = 1; seed <= seeds; ++seed) {
    const Sequence seq = synth_sequence(synth_preset("phase"), seed);
    auto auc = [&](SolverKind solver, const std::string& feature) {
      TrackerConfig c;
      c.solver = solver;
      c.kcf_feature = feature;
      const SequenceRun run = run_sequence(seq.source(), seq.groundtruth[0], c);
      return evaluate_ope(run.boxes, seq.groundtruth).auc;
    };
    up += auc(SolverKind::kMkcfup, "hog");
    hog += auc(SolverKind::kKcf, "hog");
    color += auc(SolverKind::kKcf, "color");
  }
  up /= seeds;
  hog /= seeds;
  color /= seeds;
  const double margin = up - std::max(hog, color);
  const bool pass = margin >= 0.05;
  return {pass, "mean AUC over " + std::to_string(seeds) + " seeds: mkcfup " + fmt(up) + ", kcf/hog " + fmt(hog) +
                    ", kcf/color " + fmt(color) + ", margin " + fmt(margin) + ", " + fmt(seconds_since(t0)) + " s"};
}

Outcome criterion_descent() {
  const auto t0 = Clock::now();
  Rng rng(8008);
  std::uniform_int_distribution<int> side(3, 4);
  std::uniform_int_distribution<int> chans(1, 3);
  std::uniform_real_distribution<double> log_lambda(-4.0, 0.0);
  int violations = 0;
  int steps = 0;
  double worst_rise = 0.0;
  const int instances = 100;
  for (int i = 0; i < instances; ++i) {
    const int w = side(rng);
    const int h = side(rng);
    const double lambda_o = std::pow(10.0, log_lambda(rng));
    const auto ks = testing::random_autocorrelations(rng, w, h, 2, chans(rng));
    const Labels labels = gaussian_labels(w, h, 0.2, 2);
    const auto k = grams(ks);
    const Eigen::VectorXd y = testing::vec(labels.y);

    std::vector<double> d{0.5, 0.5};
    std::vector<double> trace;
    for (int it = 0; it < 6; ++it) {
      const ComplexPlane a = mkcf_alpha_step(ks, d, labels, lambda_o);
      trace.push_back(testing::dense_objective(k, alpha_of(a), d, y, lambda_o));
      d = mkcf_d_step(ks, a, labels, lambda_o);
      trace.push_back(testing::dense_objective(k, alpha_of(a), d, y, lambda_o));
    }
    const MkcfResult lib = mkcf_alternate(ks, labels, lambda_o, 6);
    for (std::size_t j = 1; j < trace.size(); ++j) {
      ++steps;
      const double rise = trace[j] - trace[j - 1];
      const double lib_rise = lib.objective_trace[j] - lib.objective_trace[j - 1];
      worst_rise = std::max({worst_rise, rise, lib_rise});
      if (rise > 1e-12 * std::max(1.0, trace[j - 1]) ||
          lib_rise > 1e-12 * std::max(1.0, lib.objective_trace[j - 1])) {
        ++violations;
      }
    }
  }
  const bool pass = violations == 0;
  return {pass, std::to_string(instances) + " instances, " + std::to_string(steps) + " half steps, " +
                    std::to_string(violations) + " increases beyond 1e-12, largest increase " + fmt(worst_rise) +
                    ", " + fmt(seconds_since(t0)) + " s"};
}

Outcome criterion_metrics() {
  const std::vector<BoundingBox> gt(8, BoundingBox{30, 40, 10, 10});
  const std::vector<BoundingBox> shifted(8, BoundingBox{32.5, 40, 10, 10});
  const EvaluationResult r = evaluate_ope(shifted, gt);
  const EvaluationResult perfect = evaluate_ope(gt, gt);
  const double box_iou = iou(shifted[0], gt[0]);
  const bool pass = box_iou == 0.6 && r.auc == 13.0 / 21.0 && r.precision_at_20 == 1.0 && perfect.auc == 1.0 &&
                    perfect.precision_at_20 == 1.0;
  return {pass, "IoU " + fmt(box_iou) + ", shifted AUC " + fmt(r.auc) + " (13/21 expected), precision@20 " +
                    fmt(r.precision_at_20) + ", perfect AUC " + fmt(perfect.auc)};
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome criterion_performance(const std::string& cli) {
  Rng rng(1010);
  auto best_of = [](int reps, const std::function<void()>& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
      const auto t0 = Clock::now();
      f();
      best = std::min(best, seconds_since(t0));
    }
    return best;
  };
  const std::vector<int> channels{3, 4};
  const std::vector<double> d{0.5, 0.5};

  // FFT path at 64x64: kernel rows plus spectral response.
  std::vector<FeatureMap> x64, z64;
  for (int c : channels) {
    x64.push_back(testing::random_features(rng, 64, 64, c));
    z64.push_back(testing::random_features(rng, 64, 64, c));
  }
  std::vector<KernelCorrelation> train64;
  for (std::size_t m = 0; m < 2; ++m) train64.push_back(gaussian_correlation(x64[m], x64[m], 0.5));
  const ComplexPlane a64 = mkcf_alpha_step(train64, d, gaussian_labels(64, 64, 0.04, 2), 1e-3);
  double sink = 0.0;
  const double fft = best_of(5, [&] {
    std::vector<KernelCorrelation> ks;
    for (std::size_t m = 0; m < 2; ++m) ks.push_back(gaussian_correlation(x64[m], z64[m], 0.5));
    sink += detect(ks, a64, d).peak_value;
  });

  // Dense path at 16x16: explicit kernel loops, materialized Grams, matvec.
  std::vector<FeatureMap> x16, z16;
  for (int c : channels) {
    x16.push_back(testing::random_features(rng, 16, 16, c));
    z16.push_back(testing::random_features(rng, 16, 16, c));
  }
  const Eigen::VectorXd a16 = Eigen::VectorXd::Random(256);
  const double dense16 = best_of(3, [&] {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(256, 256);
    for (std::size_t m = 0; m < 2; ++m) g += d[m] * testing::dense_circulant(testing::brute_kernel(x16[m], z16[m], 0.5));
    const Eigen::VectorXd r = g * a16;
    Eigen::Index best = 0;
    r.maxCoeff(&best);
    sink += static_cast<double>(best);
  });
  const double dense64 = dense16 * 256.0;
  const double speedup = dense64 / fft;

  std::string fps_note = "no CLI path given";
  bool manifests_ok = false;
  if (!cli.empty()) {
    const auto dir = std::filesystem::temp_directory_path() / "mkcf_acceptance_fps";
    std::filesystem::remove_all(dir);
    manifests_ok = true;
    fps_note.clear();
    for (const char* solver : {"kcf", "mkcfup"}) {
      const auto out = dir / solver;
      const int code = run_cli(cli, std::string("track --synth translate --seed 1 --solver ") + solver +
                                        " --out " + out.string());
      std::ifstream in(out / "manifest.json");
      if (code != 0 || !in) {
        manifests_ok = false;
        fps_note += std::string(solver) + " run failed ";
        continue;
      }
      const auto manifest = nlohmann::json::parse(in);
      const auto& fps = manifest["timing"]["mean_fps"];
      if (!fps.is_number()) manifests_ok = false;
      fps_note += std::string(solver) + " " + (fps.is_number() ? fmt(fps.get<double>()) : "missing") + " fps ";
    }
    std::filesystem::remove_all(dir);
  }
  const bool pass = speedup >= 10.0 && manifests_ok && std::isfinite(sink);
  return {pass, "fft 64x64 " + fmt(1e3 * fft) + " ms, dense 16x16 " + fmt(1e3 * dense16) +
                    " ms x256 = " + fmt(1e3 * dense64) + " ms, speedup " + fmt(speedup) + "x; 320x240 " + fps_note};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries{
      {1, "circulant/FFT oracle equivalence", criterion_oracle_equivalence},
      {2, "multi-kernel norm inequality", criterion_lemma1},
      {3, "weight iterate positivity and bounds", criterion_theorem1},
      {4, "MKCFup recursion vs batch oracle", criterion_recursion_vs_batch},
      {5, "kernel weights vs regularization sweep", criterion_lambda_sweep},
      {6, "synthetic tracking", criterion_synthetic_tracking},
      {7, "multi-kernel benefit on phase sequence", criterion_multi_kernel_benefit},
      {8, "MKCF alternation descent", criterion_descent},
      {9, "metric closed forms", criterion_metrics},
      {10, "performance", [&cli] { return criterion_performance(cli); }},
  };
  int failures = 0;
  for (const auto& e : entries) {
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    if (!o.pass) ++failures;
    std::cout << "criterion " << e.id << ": " << (o.pass ? "PASS" : "FAIL") << " " << e.name << " | "
              << o.detail << std::endl;
  }
  std::cout << (entries.size() - failures) << "/" << entries.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
