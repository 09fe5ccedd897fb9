#pragma once

// Correlation-filter training and detection on circulant kernel structure.
//
// Three trainers share one detection routine:
//   * KCF: single kernel ridge regression, alpha_hat = y_hat / (eig(K) + lambda_o).
//   * MKCF: alternation between the ridge solve for alpha under fixed kernel
//     weights d and an exact simplex-constrained quadratic step for d (M <= 2).
//   * MKCFup: alpha and d minimize the per-kernel upper bound of the
//     multi-kernel objective with per-kernel exponential forgetting. Alpha is
//     stored as numerator/denominator spectra and d as scalar
//     numerator/denominator pairs, both updated recursively frame by frame.
//
// All spectra live on the dft2 grid; eig(K) = circulant_spectrum(k.plane).

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mkcf/kernels.hpp"
#include "mkcf/spectral.hpp"

namespace mkcf {

/// Spectral magnitudes below this raise kConditioning.
inline constexpr double kSpectralFloor = 1e-12;

struct SolverConfig {
  int kernel_count = 2;
  double lambda_o = 1e-3;
  std::vector<double> gamma = {0.0174, 0.0173};
  int iters_per_frame = 3;
  double d_floor = 1e-12;

  double mu() const noexcept { return 2.0 * kernel_count + 1.0; }
  /// Regularizer of the upper-bound objective, lambda_o / (2M + 1).
  double lambda() const noexcept { return lambda_o / mu(); }
  void validate() const;
};

struct Labels {
  RealPlane y;    // Gaussian target, peak 1 at the origin cell
  RealPlane y_c;  // y / M
  int kernel_count = 1;
};

/// Periodic Gaussian with std = bandwidth_factor * sqrt(width * height) cells,
/// peaked at cell (0, 0) with wrap-around distances.
Labels gaussian_labels(int width, int height, double bandwidth_factor, int kernel_count);

// ---------------------------------------------------------------------------
// KCF

ComplexPlane kcf_train(const KernelCorrelation& k, const Labels& labels, double lambda_o);

// ---------------------------------------------------------------------------
// MKCF

/// F(d; alpha) = 0.5 d^T A d + 0.5 d^T b + constant.
struct WeightQuadratic {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  double constant = 0.0;

  double value(const Eigen::VectorXd& d) const {
    return 0.5 * d.dot(a * d) + 0.5 * d.dot(b) + constant;
  }
};

WeightQuadratic assemble_weight_quadratic(std::span<const KernelCorrelation> ks,
                                          const ComplexPlane& alpha_spectrum,
                                          const Labels& labels, double lambda_o);

/// Minimizes F(d; alpha) over the simplex. M = 1 returns {1}; M = 2 is solved
/// in closed form on d = (t, 1 - t); larger M is rejected.
std::vector<double> mkcf_d_step(std::span<const KernelCorrelation> ks,
                                const ComplexPlane& alpha_spectrum, const Labels& labels,
                                double lambda_o);

/// alpha_hat = y_hat / (sum_m d_m eig(K_m) + lambda_o).
ComplexPlane mkcf_alpha_step(std::span<const KernelCorrelation> ks, std::span<const double> d,
                             const Labels& labels, double lambda_o);

struct MkcfResult {
  ComplexPlane alpha_spectrum;
  std::vector<double> d;
  /// F(alpha, d) after every half step, starting with the first alpha step.
  std::vector<double> objective_trace;
};

/// Alternates alpha and d steps `iters` times from d = 1/M. Raises kNumerical
/// if the objective increases by more than 1e-12 * max(1, F) in a half step.
MkcfResult mkcf_alternate(std::span<const KernelCorrelation> ks, const Labels& labels,
                          double lambda_o, int iters);

/// F(alpha, d) evaluated with spectral products (no dense matrices).
double spectral_objective(std::span<const KernelCorrelation> ks, const ComplexPlane& alpha_spectrum,
                          std::span<const double> d, const Labels& labels, double lambda_o);

// ---------------------------------------------------------------------------
// MKCFup

struct SolverState {
  std::vector<ComplexPlane> alpha_numerator;    // A^N_m
  std::vector<ComplexPlane> alpha_denominator;  // A^D_m
  std::vector<double> weight_numerator;         // d^N_m
  std::vector<double> weight_denominator;       // d^D_m
  ComplexPlane alpha_spectrum;                  // A_p = sum A^N_m / sum A^D_m
  std::vector<double> d;
  int frame = 0;
};

/// One alpha/d alternation inside a frame.
struct MkcfupIteration {
  int frame = 0;
  int iteration = 0;
  std::vector<double> d_in;    // weights used for the alpha step
  ComplexPlane alpha_spectrum;  // alpha from d_in
  std::vector<double> d_out;   // weights from alpha
};

/// First frame. Starts from d = 1/M, runs cfg.iters_per_frame alternations and
/// commits the accumulators with the final d.
SolverState mkcfup_init(std::span<const KernelCorrelation> ks, const Labels& labels,
                        const SolverConfig& cfg, std::vector<MkcfupIteration>* trace = nullptr);

/// Frame p > 1. Historical accumulators are frozen and discounted by
/// (1 - gamma_m); each alternation recomputes only the current frame's term
/// with the current d, starting again from d = 1/M. Accumulators are committed
/// once with the final d.
SolverState mkcfup_update(const SolverState& state, std::span<const KernelCorrelation> ks,
                          const Labels& labels, const SolverConfig& cfg,
                          std::vector<MkcfupIteration>* trace = nullptr);

// ---------------------------------------------------------------------------
// Detection

struct ResponseMap {
  RealPlane plane;
  int peak_x = 0;
  int peak_y = 0;
  int dx = 0;  // wrap-corrected into (-width/2, width/2]
  int dy = 0;
  double peak_value = 0.0;
};

/// Response = sum_m d_m C(k_m) alpha, evaluated spectrally. Argmax ties break
/// to the first cell in row-major order.
ResponseMap detect(std::span<const KernelCorrelation> templates_k,
                   const ComplexPlane& alpha_spectrum, std::span<const double> d);

ResponseMap locate_peak(RealPlane plane);

// ---------------------------------------------------------------------------
// Dense objectives (oracle scale)

/// 0.5 |y - sum d_m K_m alpha|^2 + lambda_o/2 alpha^T sum d_m K_m alpha.
double objective_F(const RealPlane& alpha, std::span<const double> d,
                   std::span<const KernelCorrelation> ks, const Labels& labels, double lambda_o);

/// mu/2 sum_m (|y_c - d_m K_m alpha|^2 + lambda d_m alpha^T K_m alpha), y_c = y / M.
double objective_upper(const RealPlane& alpha, std::span<const double> d,
                       std::span<const KernelCorrelation> ks, const Labels& labels, double lambda);

/// Forgetting weight of frame j (1-based) in a history of p frames.
double history_weight(double gamma, int j, int p);

/// 0.5 sum_j sum_m beta_m^j (|y_c - d_m K_m^j alpha|^2 + lambda d_m alpha^T K_m^j alpha).
/// history[j][m] is kernel m at frame j + 1.
double objective_Fp(std::span<const std::vector<KernelCorrelation>> history,
                    std::span<const double> gamma, const RealPlane& alpha,
                    std::span<const double> d, const Labels& labels, double lambda);

}  // namespace mkcf
