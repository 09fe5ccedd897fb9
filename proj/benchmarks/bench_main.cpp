#include <random>

#include <benchmark/benchmark.h>

#include "mkcf/kernels.hpp"
#include "mkcf/solvers.hpp"
#include "mkcf/spectral.hpp"
#include "mkcf/synth.hpp"
#include "mkcf/tracker.hpp"

namespace {

using namespace mkcf;

FeatureMap random_map(std::mt19937_64& rng, int side, int channels) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FeatureMap f(side, side, channels);
  for (double& v : f.values()) v = u(rng);
  return f;
}

void BM_Dft2(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RealPlane p(side, side);
  for (double& v : p.values()) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(dft2(p));
}
BENCHMARK(BM_Dft2)->Arg(16)->Arg(48)->Arg(64)->Arg(128);

void BM_GaussianCorrelation(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const FeatureMap x = random_map(rng, side, 4);
  const FeatureMap z = random_map(rng, side, 4);
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_correlation(x, z, 0.6));
}
BENCHMARK(BM_GaussianCorrelation)->Arg(16)->Arg(48)->Arg(64);

void BM_Detect(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const FeatureMap x0 = random_map(rng, side, 3);
  const FeatureMap x1 = random_map(rng, side, 4);
  const std::vector<KernelCorrelation> train{gaussian_correlation(x0, x0, 0.5), gaussian_correlation(x1, x1, 0.6)};
  const std::vector<KernelCorrelation> test{gaussian_correlation(x0, random_map(rng, side, 3), 0.5),
                                            gaussian_correlation(x1, random_map(rng, side, 4), 0.6)};
  const std::vector<double> d{0.5, 0.5};
  const ComplexPlane alpha = mkcf_alpha_step(train, d, gaussian_labels(side, side, 0.04, 2), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(detect(test, alpha, d));
}
BENCHMARK(BM_Detect)->Arg(16)->Arg(48)->Arg(64);

void BM_MkcfupUpdate(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  std::mt19937_64 rng(4);
  const FeatureMap x0 = random_map(rng, side, 3);
  const FeatureMap x1 = random_map(rng, side, 4);
  const std::vector<KernelCorrelation> ks{gaussian_correlation(x0, x0, 0.5), gaussian_correlation(x1, x1, 0.6)};
  const Labels labels = gaussian_labels(side, side, 0.04, 2);
  const SolverConfig cfg;
  const SolverState init = mkcfup_init(ks, labels, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(mkcfup_update(init, ks, labels, cfg));
}
BENCHMARK(BM_MkcfupUpdate)->Arg(16)->Arg(48);

void BM_TrackerStep(benchmark::State& state) {
  SynthSpec spec = synth_preset("translate");
  spec.frames = 2;
  const Sequence seq = synth_sequence(spec, 1);
  TrackerConfig config;
  config.solver = static_cast<SolverKind>(state.range(0));
  const TrackerState init = tracker_init(seq.frame(0), seq.groundtruth[0], config);
  const ImageFrame next = seq.frame(1);
  for (auto _ : state) {
    TrackerState s = init;
    benchmark::DoNotOptimize(tracker_step(s, next));
  }
  state.SetLabel(to_string(config.solver));
}
BENCHMARK(BM_TrackerStep)
    ->Arg(static_cast<int>(SolverKind::kKcf))
    ->Arg(static_cast<int>(SolverKind::kMkcf))
    ->Arg(static_cast<int>(SolverKind::kMkcfup))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
