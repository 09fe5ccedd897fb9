#pragma once

// Numerical checks of the upper-bound objective and of the MKCFup weight
// iteration.
//
// Theorem-1 style bounds for the next weight iterate of kernel m:
//   sigma^j_{m,n}  eigenvalues of the frame-j Gram of kernel m (real DFT of
//                  its first row),
//   w_{j,m}        forgetting weight beta_m^j times the kernel weight that
//                  frame's term was built with,
//   b_n            sum w d sigma^2 / sum w sigma (d folded into w once),
//   c^N_n          sum_j beta_m^j sigma^j_{m,n},
//   y_u            |DFT(y_c)| / sqrt(cells),
//   c_l = y_min^2 c^N_min / (y_max^2 c^N_max),  c_u = 1 / c_l,
//   lower = c_l (lambda / 2 + b_min),  upper = c_u (lambda / 2 + b_max).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mkcf/sequence.hpp"
#include "mkcf/solvers.hpp"
#include "mkcf/tracker.hpp"

namespace mkcf {

struct Lemma1Check {
  double lhs = 0.0;  // |sum a_m|^2
  double rhs = 0.0;  // (2M + 1) sum |a_m|^2
  bool holds = true;
};

Lemma1Check check_lemma1(std::span<const Eigen::VectorXd> vectors);

struct Lemma1Draw {
  int kernels = 0;
  int length = 0;
  Lemma1Check check;
};

/// Random draws with M cycling through {2, 3, 5}, lengths 1..64 and entry
/// scales spanning several decades; every fourth draw repeats one vector.
std::vector<Lemma1Draw> lemma1_random_draws(std::uint64_t seed, int count);

/// History of one MKCFup frame, oldest first.
struct Theorem1Instance {
  std::vector<std::vector<KernelCorrelation>> kernels;  // [frame][kernel]
  std::vector<std::vector<double>> weights;             // d used by each frame's term
  std::vector<double> gamma;
  Labels labels;
  double lambda = 0.0;
};

struct Theorem1Bounds {
  int kernel = 0;
  double b_min = 0.0;
  double b_max = 0.0;
  double c_l = 0.0;
  double c_u = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  bool vacuous = false;  // y_min at or below the floor; interval carries no information
};

inline constexpr double kLabelSpectrumFloor = 1e-12;

/// One interval per kernel. Preconditions (plane <= 8x8, real positive Gram
/// spectra, positive y_c, positive weights, lambda > 0) raise kPrecondition
/// naming the violated hypothesis.
std::vector<Theorem1Bounds> theorem1_bounds(const Theorem1Instance& instance);

struct Theorem1Trial {
  int instance = 0;
  int frame = 0;
  int iteration = 0;
  int kernel = 0;
  double d_next = 0.0;
  Theorem1Bounds bounds;
  bool positive = false;
  bool contained = false;
  std::string error;  // non-empty when the instance was rejected
};

/// Random oracle-scale MKCFup runs (1 to 3 frames, up to 8x8 planes). Every
/// within-frame iteration is checked against the bounds built from its input
/// weights.
std::vector<Theorem1Trial> theorem1_random_trials(std::uint64_t seed, int instances);

struct LambdaSweepRow {
  double lambda = 0.0;
  double d_bar = 0.0;
  double delta_max = 0.0;
  double delta_min = 0.0;
  double sum_d_mean = 0.0;
  int samples = 0;
  int failures = 0;  // sequences whose run raised
};

std::vector<double> default_lambda_grid();

/// Tracks each sequence with MKCFup at lambda_o = (2M + 1) * lambda and
/// samples the committed weights at `samples_per_sequence` seeded random
/// frames (all frames when fewer). The same frames are sampled for every
/// lambda. Runs (lambda, sequence) pairs concurrently.
std::vector<LambdaSweepRow> lambda_sweep(std::span<const double> lambdas,
                                         std::span<const Sequence> sequences,
                                         int samples_per_sequence, std::uint64_t seed,
                                         const TrackerConfig& base = {});

}  // namespace mkcf
