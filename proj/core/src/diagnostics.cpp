#include "mkcf/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

namespace mkcf {

Lemma1Check check_lemma1(std::span<const Eigen::VectorXd> vectors) {
  Lemma1Check r;
  if (vectors.empty()) return r;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(vectors.front().size());
  double squares = 0.0;
  for (const auto& v : vectors) {
    if (v.size() != sum.size()) raise(ErrorKind::kDimensionMismatch, "lemma1: unequal lengths");
    sum += v;
    squares += v.squaredNorm();
  }
  r.lhs = sum.squaredNorm();
  r.rhs = (2.0 * static_cast<double>(vectors.size()) + 1.0) * squares;
  r.holds = r.lhs <= r.rhs + 1e-10;
  return r;
}

std::vector<Lemma1Draw> lemma1_random_draws(std::uint64_t seed, int count) {
  constexpr std::array<int, 3> kCounts = {2, 3, 5};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length(1, 64);
  std::uniform_real_distribution<double> exponent(-3.0, 3.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Lemma1Draw> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    Lemma1Draw draw;
    draw.kernels = kCounts[static_cast<std::size_t>(i) % kCounts.size()];
    draw.length = length(rng);
    const double scale = std::pow(10.0, exponent(rng));
    std::vector<Eigen::VectorXd> vs;
    for (int m = 0; m < draw.kernels; ++m) {
      if (i % 4 == 3 && m > 0) {
        vs.push_back(vs.front());
        continue;
      }
      Eigen::VectorXd v(draw.length);
      for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = scale * normal(rng);
      vs.push_back(std::move(v));
    }
    draw.check = check_lemma1(vs);
    out.push_back(draw);
  }
  return out;
}

namespace {

void precondition(bool ok, const std::string& hypothesis) {
  if (!ok) raise(ErrorKind::kPrecondition, "theorem1: " + hypothesis);
}

/// Real eigenvalues of a circulant Gram; rejects non-SPD spectra.
std::vector<double> gram_eigenvalues(const KernelCorrelation& k) {
  const ComplexPlane spec = circulant_spectrum(k.plane);
  double scale = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) scale = std::max(scale, std::abs(spec[i]));
  std::vector<double> out(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    precondition(std::abs(spec[i].imag()) <= 1e-9 * std::max(scale, 1.0),
                 "Gram matrix is not symmetric (complex eigenvalues)");
    precondition(spec[i].real() > 0.0, "Gram matrix is not positive definite");
    out[i] = spec[i].real();
  }
  return out;
}

}  // namespace

std::vector<Theorem1Bounds> theorem1_bounds(const Theorem1Instance& inst) {
  const std::size_t frames = inst.kernels.size();
  precondition(frames >= 1, "history is empty");
  precondition(inst.weights.size() == frames, "one weight vector per frame is required");
  const std::size_t m_count = inst.kernels.front().size();
  precondition(m_count >= 1 && inst.gamma.size() == m_count, "one learning rate per kernel");
  precondition(inst.lambda > 0.0, "lambda must be positive");
  const RealPlane& yc = inst.labels.y_c;
  precondition(yc.size() <= 64, "oracle scale requires planes of at most 8x8 cells");
  for (std::size_t i = 0; i < yc.size(); ++i) precondition(yc[i] > 0.0, "y_c must be positive");
  for (double g : inst.gamma) precondition(g > 0.0 && g <= 1.0, "learning rates must lie in (0, 1]");

  const int p = static_cast<int>(frames);
  const std::size_t cells = yc.size();
  // eig[j][m][n]
  std::vector<std::vector<std::vector<double>>> eig(frames);
  for (std::size_t j = 0; j < frames; ++j) {
    precondition(inst.kernels[j].size() == m_count && inst.weights[j].size() == m_count,
                 "kernel count differs between frames");
    for (std::size_t m = 0; m < m_count; ++m) {
      precondition(inst.kernels[j][m].plane.same_shape(yc), "kernel and label shapes differ");
      precondition(inst.weights[j][m] > 0.0, "kernel weights must be positive");
      eig[j].push_back(gram_eigenvalues(inst.kernels[j][m]));
    }
  }

  double b_num_max = 0.0, b_den_min = 0.0, b_num_min = 0.0, b_den_max = 0.0;
  for (std::size_t j = 0; j < frames; ++j) {
    for (std::size_t m = 0; m < m_count; ++m) {
      const auto [lo, hi] = std::minmax_element(eig[j][m].begin(), eig[j][m].end());
      const double beta = history_weight(inst.gamma[m], static_cast<int>(j) + 1, p);
      const double d = inst.weights[j][m];
      b_num_max += beta * d * d * (*hi) * (*hi);
      b_num_min += beta * d * d * (*lo) * (*lo);
      b_den_min += beta * d * (*lo);
      b_den_max += beta * d * (*hi);
    }
  }
  const double b_max = b_num_max / b_den_min;
  const double b_min = b_num_min / b_den_max;

  const ComplexPlane y_hat = dft2(yc);
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = 0.0;
  const double unitary = 1.0 / std::sqrt(static_cast<double>(cells));
  for (std::size_t n = 0; n < cells; ++n) {
    const double v = std::abs(y_hat[n]) * unitary;
    y_min = std::min(y_min, v);
    y_max = std::max(y_max, v);
  }

  std::vector<Theorem1Bounds> out;
  for (std::size_t m = 0; m < m_count; ++m) {
    double c_min = std::numeric_limits<double>::infinity();
    double c_max = 0.0;
    for (std::size_t n = 0; n < cells; ++n) {
      double c = 0.0;
      for (std::size_t j = 0; j < frames; ++j) {
        c += history_weight(inst.gamma[m], static_cast<int>(j) + 1, p) * eig[j][m][n];
      }
      c_min = std::min(c_min, c);
      c_max = std::max(c_max, c);
    }
    Theorem1Bounds b;
    b.kernel = static_cast<int>(m);
    b.b_min = b_min;
    b.b_max = b_max;
    b.y_min = y_min;
    b.y_max = y_max;
    b.vacuous = y_min <= kLabelSpectrumFloor;
    if (b.vacuous) {
      b.c_l = 0.0;
      b.c_u = std::numeric_limits<double>::infinity();
    } else {
      b.c_l = (y_min * y_min * c_min) / (y_max * y_max * c_max);
      b.c_u = 1.0 / b.c_l;
    }
    b.lower = b.c_l * inst.lambda / 2.0 + b.c_l * b_min;
    b.upper = b.c_u * inst.lambda / 2.0 + b.c_u * b_max;
    out.push_back(b);
  }
  return out;
}

std::vector<Theorem1Trial> theorem1_random_trials(std::uint64_t seed, int instances) {
  std::vector<Theorem1Trial> trials;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> side(3, 8);
  std::uniform_int_distribution<int> channels(1, 3);
  std::uniform_int_distribution<int> frame_count(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (int inst = 0; inst < instances; ++inst) {
    const int w = side(rng);
    const int h = side(rng);
    const int frames = frame_count(rng);
    constexpr int kKernels = 2;
    SolverConfig cfg;
    cfg.kernel_count = kKernels;
    cfg.lambda_o = std::pow(10.0, -3.0 + 3.0 * unit(rng));
    cfg.gamma = {0.05 + 0.9 * unit(rng), 0.05 + 0.9 * unit(rng)};
    cfg.iters_per_frame = 3;
    const Labels labels = gaussian_labels(w, h, 0.1 + 0.2 * unit(rng), kKernels);
    std::array<double, kKernels> sigma{0.3 + 0.6 * unit(rng), 0.3 + 0.6 * unit(rng)};
    std::array<int, kKernels> chans{channels(rng), channels(rng)};

    std::vector<std::vector<KernelCorrelation>> history;
    std::vector<std::vector<double>> committed;
    std::vector<MkcfupIteration> trace;
    SolverState state;
    std::string error;
    try {
      for (int f = 0; f < frames; ++f) {
        std::vector<KernelCorrelation> ks;
        for (int m = 0; m < kKernels; ++m) {
          FeatureMap x(w, h, chans[static_cast<std::size_t>(m)]);
          for (double& v : x.values()) v = normal(rng);
          ks.push_back(gaussian_correlation(x, x, sigma[static_cast<std::size_t>(m)]));
        }
        history.push_back(ks);
        state = f == 0 ? mkcfup_init(ks, labels, cfg, &trace)
                       : mkcfup_update(state, ks, labels, cfg, &trace);
        committed.push_back(state.d);
      }
    } catch (const Error& e) {
      error = e.what();
    }

    for (const MkcfupIteration& it : trace) {
      Theorem1Instance ti;
      ti.kernels.assign(history.begin(), history.begin() + it.frame);
      ti.weights.assign(committed.begin(), committed.begin() + (it.frame - 1));
      ti.weights.push_back(it.d_in);
      ti.gamma = cfg.gamma;
      ti.labels = labels;
      ti.lambda = cfg.lambda();
      std::vector<Theorem1Bounds> bounds;
      std::string trial_error = error;
      try {
        bounds = theorem1_bounds(ti);
      } catch (const Error& e) {
        trial_error = e.what();
      }
      for (int m = 0; m < kKernels; ++m) {
        Theorem1Trial t;
        t.instance = inst;
        t.frame = it.frame;
        t.iteration = it.iteration;
        t.kernel = m;
        t.d_next = it.d_out[static_cast<std::size_t>(m)];
        t.positive = t.d_next > 0.0;
        t.error = trial_error;
        if (!bounds.empty()) {
          t.bounds = bounds[static_cast<std::size_t>(m)];
          t.contained = t.bounds.lower < t.d_next && t.d_next < t.bounds.upper;
        }
        trials.push_back(t);
      }
    }
    if (trace.empty()) {
      Theorem1Trial t;
      t.instance = inst;
      t.error = error.empty() ? "no iterations recorded" : error;
      trials.push_back(t);
    }
  }
  return trials;
}

std::vector<double> default_lambda_grid() { return {1e-3, 1e-2, 1e-1, 1.0, 10.0, 1e2, 1e3, 1e4}; }

namespace {

struct SweepSample {
  std::vector<std::vector<double>> d;  // per sampled frame
  bool failed = false;
};

SweepSample sweep_one(double lambda, const Sequence& seq, const std::vector<int>& frames,
                      const TrackerConfig& base) {
  TrackerConfig cfg = base;
  cfg.solver = SolverKind::kMkcfup;
  const double mu = 2.0 * 2 + 1.0;
  cfg.lambda_o = mu * lambda;
  SweepSample out;
  try {
    std::vector<std::vector<double>> per_frame;
    TrackerState state = tracker_init(seq.frame(0), seq.groundtruth.front(), cfg);
    per_frame.push_back(state.d);
    for (int i = 1; i < seq.size(); ++i) {
      tracker_step(state, seq.frame(i));
      per_frame.push_back(state.d);
    }
    for (int f : frames) out.d.push_back(per_frame[static_cast<std::size_t>(f)]);
  } catch (const Error&) {
    out.failed = true;
  }
  return out;
}

}  // namespace

std::vector<LambdaSweepRow> lambda_sweep(std::span<const double> lambdas,
                                         std::span<const Sequence> sequences,
                                         int samples_per_sequence, std::uint64_t seed,
                                         const TrackerConfig& base) {
  if (sequences.empty()) raise(ErrorKind::kInvalidArgument, "lambda_sweep: no sequences");
  if (lambdas.empty()) raise(ErrorKind::kInvalidArgument, "lambda_sweep: no lambda values");
  if (samples_per_sequence < 1) raise(ErrorKind::kInvalidArgument, "lambda_sweep: samples must be >= 1");
  for (double l : lambdas) {
    if (!(l > 0.0)) raise(ErrorKind::kInvalidArgument, "lambda_sweep: lambda must be > 0");
  }

  std::vector<std::vector<int>> sampled(sequences.size());
  for (std::size_t s = 0; s < sequences.size(); ++s) {
    if (sequences[s].size() < 1) raise(ErrorKind::kInvalidArgument, "lambda_sweep: empty sequence");
    std::vector<int> all(static_cast<std::size_t>(sequences[s].size()));
    std::iota(all.begin(), all.end(), 0);
    std::mt19937_64 rng(seed + s);
    std::sample(all.begin(), all.end(), std::back_inserter(sampled[s]),
                static_cast<std::size_t>(samples_per_sequence), rng);
  }

  std::vector<std::vector<std::future<SweepSample>>> jobs(lambdas.size());
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    for (std::size_t s = 0; s < sequences.size(); ++s) {
      jobs[l].push_back(std::async(std::launch::async, sweep_one, lambdas[l],
                                   std::cref(sequences[s]), std::cref(sampled[s]), std::cref(base)));
    }
  }

  std::vector<LambdaSweepRow> rows;
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    LambdaSweepRow row;
    row.lambda = lambdas[l];
    row.delta_min = std::numeric_limits<double>::infinity();
    row.delta_max = -std::numeric_limits<double>::infinity();
    double d_sum = 0.0;
    int d_count = 0;
    double sum_total = 0.0;
    for (auto& job : jobs[l]) {
      const SweepSample sample = job.get();
      if (sample.failed) {
        ++row.failures;
        continue;
      }
      for (const auto& d : sample.d) {
        double frame_sum = 0.0;
        for (double v : d) {
          d_sum += v;
          ++d_count;
          frame_sum += v;
          row.delta_min = std::min(row.delta_min, v);
          row.delta_max = std::max(row.delta_max, v);
        }
        sum_total += frame_sum;
        ++row.samples;
      }
    }
    if (row.samples > 0) {
      row.d_bar = d_sum / d_count;
      row.sum_d_mean = sum_total / row.samples;
    } else {
      row.delta_min = row.delta_max = std::numeric_limits<double>::quiet_NaN();
      row.d_bar = row.sum_d_mean = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mkcf
