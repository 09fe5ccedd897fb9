#include "mkcf/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mkcf {

void SolverConfig::validate() const {
  if (kernel_count < 1) raise(ErrorKind::kInvalidArgument, "kernel_count must be >= 1");
  if (!(lambda_o > 0.0)) raise(ErrorKind::kInvalidArgument, "lambda_o must be > 0");
  if (iters_per_frame < 1) raise(ErrorKind::kInvalidArgument, "iters_per_frame must be >= 1");
  if (d_floor < 0.0) raise(ErrorKind::kInvalidArgument, "d_floor must be >= 0");
  if (static_cast<int>(gamma.size()) != kernel_count) {
    raise(ErrorKind::kInvalidArgument, "need one learning rate per kernel");
  }
  for (double g : gamma) {
    if (!(g > 0.0 && g <= 1.0)) {
      raise(ErrorKind::kInvalidArgument, "learning rates must lie in (0, 1]");
    }
  }
}

Labels gaussian_labels(int width, int height, double bandwidth_factor, int kernel_count) {
  if (width < 3 || height < 3) {
    raise(ErrorKind::kInvalidDimension, "labels need at least 3x3 cells");
  }
  if (!(bandwidth_factor > 0.0)) raise(ErrorKind::kInvalidArgument, "bandwidth must be > 0");
  if (kernel_count < 1) raise(ErrorKind::kInvalidArgument, "kernel_count must be >= 1");

  const double sigma = bandwidth_factor * std::sqrt(static_cast<double>(width) * height);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  Labels labels{RealPlane(width, height), RealPlane(width, height), kernel_count};
  for (int y = 0; y < height; ++y) {
    const int wy = y > height / 2 ? y - height : y;
    for (int x = 0; x < width; ++x) {
      const int wx = x > width / 2 ? x - width : x;
      const double v = std::exp(-static_cast<double>(wx * wx + wy * wy) * inv);
      labels.y(x, y) = v;
      labels.y_c(x, y) = v / kernel_count;
    }
  }
  return labels;
}

namespace {

void require_same_grid(std::span<const KernelCorrelation> ks, const RealPlane& ref,
                       const char* what) {
  if (ks.empty()) raise(ErrorKind::kInvalidArgument, std::string(what) + ": no kernels");
  for (const auto& k : ks) {
    if (!k.plane.same_shape(ref)) {
      raise(ErrorKind::kDimensionMismatch, std::string(what) + ": kernel/label shape mismatch");
    }
  }
}

void require_well_conditioned(const ComplexPlane& denominator, const char* what) {
  for (std::size_t i = 0; i < denominator.size(); ++i) {
    if (!(std::abs(denominator[i]) >= kSpectralFloor)) {
      raise(ErrorKind::kConditioning,
            std::string(what) + ": spectral denominator magnitude " +
                std::to_string(std::abs(denominator[i])) + " at bin " + std::to_string(i));
    }
  }
}

std::vector<ComplexPlane> spectra_of(std::span<const KernelCorrelation> ks) {
  std::vector<ComplexPlane> out;
  out.reserve(ks.size());
  for (const auto& k : ks) out.push_back(circulant_spectrum(k.plane));
  return out;
}

/// K alpha for a kernel spectrum and an alpha spectrum.
RealPlane apply_gram(const ComplexPlane& eig, const ComplexPlane& alpha_spectrum) {
  return idft2(hadamard(eig, alpha_spectrum));
}

}  // namespace

ComplexPlane kcf_train(const KernelCorrelation& k, const Labels& labels, double lambda_o) {
  if (!(lambda_o > 0.0)) raise(ErrorKind::kInvalidArgument, "kcf_train: lambda_o must be > 0");
  if (!k.plane.same_shape(labels.y)) {
    raise(ErrorKind::kDimensionMismatch, "kcf_train: kernel/label shape mismatch");
  }
  ComplexPlane denominator = circulant_spectrum(k.plane);
  for (std::size_t i = 0; i < denominator.size(); ++i) denominator[i] += lambda_o;
  require_well_conditioned(denominator, "kcf_train");
  const ComplexPlane yf = dft2(labels.y);
  ComplexPlane alpha(yf.width(), yf.height());
  for (std::size_t i = 0; i < yf.size(); ++i) alpha[i] = yf[i] / denominator[i];
  return alpha;
}

ComplexPlane mkcf_alpha_step(std::span<const KernelCorrelation> ks, std::span<const double> d,
                             const Labels& labels, double lambda_o) {
  require_same_grid(ks, labels.y, "mkcf_alpha_step");
  if (d.size() != ks.size()) raise(ErrorKind::kDimensionMismatch, "mkcf_alpha_step: |d| != M");
  ComplexPlane denominator(labels.y.width(), labels.y.height(), Complex(lambda_o, 0.0));
  for (std::size_t m = 0; m < ks.size(); ++m) {
    const ComplexPlane eig = circulant_spectrum(ks[m].plane);
    for (std::size_t i = 0; i < eig.size(); ++i) denominator[i] += d[m] * eig[i];
  }
  require_well_conditioned(denominator, "mkcf_alpha_step");
  const ComplexPlane yf = dft2(labels.y);
  ComplexPlane alpha(yf.width(), yf.height());
  for (std::size_t i = 0; i < yf.size(); ++i) alpha[i] = yf[i] / denominator[i];
  return alpha;
}

WeightQuadratic assemble_weight_quadratic(std::span<const KernelCorrelation> ks,
                                          const ComplexPlane& alpha_spectrum,
                                          const Labels& labels, double lambda_o) {
  require_same_grid(ks, labels.y, "assemble_weight_quadratic");
  const auto m_count = static_cast<Eigen::Index>(ks.size());
  std::vector<RealPlane> k_alpha;
  k_alpha.reserve(ks.size());
  for (const auto& k : ks) k_alpha.push_back(apply_gram(circulant_spectrum(k.plane), alpha_spectrum));
  const RealPlane alpha = idft2(alpha_spectrum);

  RealPlane b_vec(alpha.width(), alpha.height());
  for (std::size_t i = 0; i < b_vec.size(); ++i) b_vec[i] = lambda_o * alpha[i] - 2.0 * labels.y[i];

  WeightQuadratic q;
  q.a.resize(m_count, m_count);
  q.b.resize(m_count);
  for (Eigen::Index m = 0; m < m_count; ++m) {
    for (Eigen::Index n = m; n < m_count; ++n) {
      const double v = dot(k_alpha[m], k_alpha[n]);
      q.a(m, n) = v;
      q.a(n, m) = v;
    }
    q.b(m) = dot(b_vec, k_alpha[m]);
  }
  q.constant = 0.5 * squared_norm(labels.y);
  return q;
}

std::vector<double> mkcf_d_step(std::span<const KernelCorrelation> ks,
                                const ComplexPlane& alpha_spectrum, const Labels& labels,
                                double lambda_o) {
  if (ks.size() == 1) return {1.0};
  if (ks.size() != 2) {
    raise(ErrorKind::kInvalidArgument, "mkcf_d_step supports M <= 2 kernels");
  }
  const WeightQuadratic q = assemble_weight_quadratic(ks, alpha_spectrum, labels, lambda_o);
  if (!q.a.allFinite() || !q.b.allFinite()) {
    raise(ErrorKind::kNumerical, "mkcf_d_step: non-finite quadratic coefficients");
  }
  // f(t) = value((t, 1 - t)); f'(t) = curvature * t + slope0.
  const double curvature = q.a(0, 0) - 2.0 * q.a(0, 1) + q.a(1, 1);
  const double slope0 = q.a(0, 1) - q.a(1, 1) + 0.5 * (q.b(0) - q.b(1));
  const double scale = std::max({std::abs(q.a(0, 0)), std::abs(q.a(1, 1)), std::abs(q.b(0)),
                                 std::abs(q.b(1)), 1e-300});
  auto f = [&](double t) { return q.value(Eigen::Vector2d(t, 1.0 - t)); };

  double t = 0.5;
  if (curvature > 1e-12 * scale) {
    t = std::clamp(-slope0 / curvature, 0.0, 1.0);
  } else {
    const double f0 = f(0.0);
    const double f1 = f(1.0);
    if (std::abs(f0 - f1) > 1e-12 * scale) t = f0 < f1 ? 0.0 : 1.0;
  }
  return {t, 1.0 - t};
}

double spectral_objective(std::span<const KernelCorrelation> ks, const ComplexPlane& alpha_spectrum,
                          std::span<const double> d, const Labels& labels, double lambda_o) {
  require_same_grid(ks, labels.y, "spectral_objective");
  ComplexPlane combined(alpha_spectrum.width(), alpha_spectrum.height());
  for (std::size_t m = 0; m < ks.size(); ++m) {
    const ComplexPlane eig = circulant_spectrum(ks[m].plane);
    for (std::size_t i = 0; i < eig.size(); ++i) combined[i] += d[m] * eig[i];
  }
  const RealPlane k_alpha = apply_gram(combined, alpha_spectrum);
  const RealPlane alpha = idft2(alpha_spectrum);
  double residual = 0.0;
  for (std::size_t i = 0; i < k_alpha.size(); ++i) {
    const double r = labels.y[i] - k_alpha[i];
    residual += r * r;
  }
  return 0.5 * residual + 0.5 * lambda_o * dot(alpha, k_alpha);
}

MkcfResult mkcf_alternate(std::span<const KernelCorrelation> ks, const Labels& labels,
                          double lambda_o, int iters) {
  if (iters < 1) raise(ErrorKind::kInvalidArgument, "mkcf_alternate: iters must be >= 1");
  require_same_grid(ks, labels.y, "mkcf_alternate");
  MkcfResult result;
  result.d.assign(ks.size(), 1.0 / static_cast<double>(ks.size()));

  auto record = [&](double value) {
    if (!result.objective_trace.empty()) {
      const double prev = result.objective_trace.back();
      if (value > prev + 1e-12 * std::max(1.0, std::abs(prev))) {
        raise(ErrorKind::kNumerical, "mkcf_alternate: objective increased from " +
                                         std::to_string(prev) + " to " + std::to_string(value));
      }
    }
    result.objective_trace.push_back(value);
  };

  for (int it = 0; it < iters; ++it) {
    result.alpha_spectrum = mkcf_alpha_step(ks, result.d, labels, lambda_o);
    record(spectral_objective(ks, result.alpha_spectrum, result.d, labels, lambda_o));
    result.d = mkcf_d_step(ks, result.alpha_spectrum, labels, lambda_o);
    record(spectral_objective(ks, result.alpha_spectrum, result.d, labels, lambda_o));
  }
  return result;
}

namespace {

struct FrameTerms {
  std::vector<ComplexPlane> numerator;
  std::vector<ComplexPlane> denominator;
};

/// Accumulators for the current frame: keep * history + rate * term(d).
FrameTerms accumulate_alpha(const SolverState* history, const std::vector<ComplexPlane>& eig,
                            const ComplexPlane& yc_hat, std::span<const double> d,
                            const SolverConfig& cfg) {
  FrameTerms out;
  const double lambda = cfg.lambda();
  for (std::size_t m = 0; m < eig.size(); ++m) {
    const double rate = history ? cfg.gamma[m] : 1.0;
    const double keep = 1.0 - rate;
    ComplexPlane num(yc_hat.width(), yc_hat.height());
    ComplexPlane den(yc_hat.width(), yc_hat.height());
    for (std::size_t i = 0; i < yc_hat.size(); ++i) {
      const Complex weighted = d[m] * eig[m][i];
      num[i] = rate * weighted * yc_hat[i];
      den[i] = rate * weighted * (weighted + lambda);
      if (history) {
        num[i] += keep * history->alpha_numerator[m][i];
        den[i] += keep * history->alpha_denominator[m][i];
      }
    }
    out.numerator.push_back(std::move(num));
    out.denominator.push_back(std::move(den));
  }
  return out;
}

ComplexPlane ratio_of_sums(const FrameTerms& terms) {
  const int w = terms.numerator.front().width();
  const int h = terms.numerator.front().height();
  ComplexPlane num(w, h);
  ComplexPlane den(w, h);
  for (std::size_t m = 0; m < terms.numerator.size(); ++m) {
    for (std::size_t i = 0; i < num.size(); ++i) {
      num[i] += terms.numerator[m][i];
      den[i] += terms.denominator[m][i];
    }
  }
  require_well_conditioned(den, "mkcfup alpha");
  for (std::size_t i = 0; i < num.size(); ++i) num[i] /= den[i];
  return num;
}

SolverState mkcfup_frame(const SolverState* history, std::span<const KernelCorrelation> ks,
                         const Labels& labels, const SolverConfig& cfg,
                         std::vector<MkcfupIteration>* trace) {
  cfg.validate();
  if (static_cast<int>(ks.size()) != cfg.kernel_count) {
    raise(ErrorKind::kDimensionMismatch, "mkcfup: expected " + std::to_string(cfg.kernel_count) +
                                             " kernels, got " + std::to_string(ks.size()));
  }
  require_same_grid(ks, labels.y_c, "mkcfup");
  if (history && (history->alpha_numerator.size() != ks.size() ||
                  !history->alpha_numerator.front().same_shape(labels.y_c))) {
    raise(ErrorKind::kDimensionMismatch, "mkcfup_update: state does not match kernels");
  }

  const std::size_t m_count = ks.size();
  const double lambda = cfg.lambda();
  const std::vector<ComplexPlane> eig = spectra_of(ks);
  const ComplexPlane yc_hat = dft2(labels.y_c);
  const int frame = history ? history->frame + 1 : 1;

  SolverState next;
  next.frame = frame;
  next.d.assign(m_count, 1.0 / static_cast<double>(m_count));
  next.weight_numerator.assign(m_count, 0.0);
  next.weight_denominator.assign(m_count, 0.0);

  RealPlane residual_target(labels.y_c.width(), labels.y_c.height());
  for (int it = 0; it < cfg.iters_per_frame; ++it) {
    const FrameTerms terms = accumulate_alpha(history, eig, yc_hat, next.d, cfg);
    const ComplexPlane alpha_spectrum = ratio_of_sums(terms);
    const RealPlane alpha = idft2(alpha_spectrum);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      residual_target[i] = 2.0 * labels.y_c[i] - lambda * alpha[i];
    }

    std::vector<double> d_out(m_count);
    for (std::size_t m = 0; m < m_count; ++m) {
      const double rate = history ? cfg.gamma[m] : 1.0;
      const RealPlane k_alpha = apply_gram(eig[m], alpha_spectrum);
      double num = rate * dot(k_alpha, residual_target);
      double den = 2.0 * rate * squared_norm(k_alpha);
      if (history) {
        num += (1.0 - rate) * history->weight_numerator[m];
        den += (1.0 - rate) * history->weight_denominator[m];
      }
      if (!(den > cfg.d_floor)) {
        raise(ErrorKind::kDegenerateKernel, "mkcfup: weight denominator " + std::to_string(den) +
                                                " for kernel " + std::to_string(m));
      }
      d_out[m] = num / den;
      if (!std::isfinite(d_out[m]) || d_out[m] <= 0.0) {
        raise(ErrorKind::kNumerical, "mkcfup: kernel weight " + std::to_string(d_out[m]) +
                                         " for kernel " + std::to_string(m) + " is not positive");
      }
      next.weight_numerator[m] = num;
      next.weight_denominator[m] = den;
    }
    if (trace) trace->push_back({frame, it + 1, next.d, alpha_spectrum, d_out});
    next.d = std::move(d_out);
  }

  FrameTerms committed = accumulate_alpha(history, eig, yc_hat, next.d, cfg);
  next.alpha_spectrum = ratio_of_sums(committed);
  next.alpha_numerator = std::move(committed.numerator);
  next.alpha_denominator = std::move(committed.denominator);
  return next;
}

}  // namespace

SolverState mkcfup_init(std::span<const KernelCorrelation> ks, const Labels& labels,
                        const SolverConfig& cfg, std::vector<MkcfupIteration>* trace) {
  return mkcfup_frame(nullptr, ks, labels, cfg, trace);
}

SolverState mkcfup_update(const SolverState& state, std::span<const KernelCorrelation> ks,
                          const Labels& labels, const SolverConfig& cfg,
                          std::vector<MkcfupIteration>* trace) {
  if (state.frame < 1) raise(ErrorKind::kInvalidArgument, "mkcfup_update: state not initialized");
  return mkcfup_frame(&state, ks, labels, cfg, trace);
}

ResponseMap locate_peak(RealPlane plane) {
  ResponseMap r;
  std::size_t best = 0;
  for (std::size_t i = 1; i < plane.size(); ++i) {
    if (plane[i] > plane[best]) best = i;
  }
  const int w = plane.width();
  const int h = plane.height();
  r.peak_x = static_cast<int>(best % static_cast<std::size_t>(w));
  r.peak_y = static_cast<int>(best / static_cast<std::size_t>(w));
  r.dx = r.peak_x > w / 2 ? r.peak_x - w : r.peak_x;
  r.dy = r.peak_y > h / 2 ? r.peak_y - h : r.peak_y;
  r.peak_value = plane[best];
  r.plane = std::move(plane);
  return r;
}

ResponseMap detect(std::span<const KernelCorrelation> templates_k,
                   const ComplexPlane& alpha_spectrum, std::span<const double> d) {
  if (templates_k.empty() || templates_k.size() != d.size()) {
    raise(ErrorKind::kDimensionMismatch, "detect: need one weight per kernel");
  }
  ComplexPlane combined(alpha_spectrum.width(), alpha_spectrum.height());
  for (std::size_t m = 0; m < templates_k.size(); ++m) {
    if (!templates_k[m].plane.same_shape(alpha_spectrum)) {
      raise(ErrorKind::kDimensionMismatch, "detect: kernel/alpha shape mismatch");
    }
    if (!std::isfinite(d[m])) raise(ErrorKind::kNumerical, "detect: non-finite kernel weight");
    const ComplexPlane eig = circulant_spectrum(templates_k[m].plane);
    for (std::size_t i = 0; i < eig.size(); ++i) combined[i] += d[m] * eig[i];
  }
  return locate_peak(apply_gram(combined, alpha_spectrum));
}

}  // namespace mkcf
