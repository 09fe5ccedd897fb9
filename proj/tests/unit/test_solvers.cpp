#include <gtest/gtest.h>

#include "mkcf/errors.hpp"
#include "mkcf/solvers.hpp"
#include "oracles.hpp"

namespace mkcf {
namespace {

using testing::Rng;

std::vector<Eigen::MatrixXd> grams(const std::vector<KernelCorrelation>& ks) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& k : ks) out.push_back(testing::dense_circulant(k.plane));
  return out;
}

Eigen::VectorXd alpha_of(const ComplexPlane& spectrum) { return testing::vec(idft2(spectrum)); }

SolverConfig config_for(Rng& rng, int kernels, double lambda_o) {
  std::uniform_real_distribution<double> g(0.05, 0.6);
  SolverConfig cfg;
  cfg.kernel_count = kernels;
  cfg.lambda_o = lambda_o;
  cfg.gamma.clear();
  for (int m = 0; m < kernels; ++m) cfg.gamma.push_back(g(rng));
  return cfg;
}

TEST(Labels, PeriodicGaussianPeakedAtOrigin) {
  const Labels l = gaussian_labels(8, 6, 0.1, 2);
  const Eigen::VectorXd ref = testing::dense_labels(8, 6, 0.1 * std::sqrt(48.0));
  EXPECT_LT(testing::rel_err(testing::vec(l.y), ref), 1e-14);
  EXPECT_EQ(l.y(0, 0), 1.0);
  EXPECT_EQ(l.kernel_count, 2);
  for (std::size_t i = 0; i < l.y.size(); ++i) EXPECT_DOUBLE_EQ(l.y_c[i], 0.5 * l.y[i]);
}

TEST(Kcf, MatchesDenseRidgeRegression) {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int w = 3 + trial % 3;
    const int h = 3 + trial % 2;
    const auto ks = testing::random_autocorrelations(rng, w, h, 1, 1 + trial % 3);
    const Labels labels = gaussian_labels(w, h, 0.2, 1);
    const double lambda_o = 1e-3;
    const Eigen::MatrixXd k = testing::dense_circulant(ks[0].plane);
    const Eigen::VectorXd ref =
        (k + lambda_o * Eigen::MatrixXd::Identity(w * h, w * h)).fullPivLu().solve(testing::vec(labels.y));
    EXPECT_LT(testing::rel_err(alpha_of(kcf_train(ks[0], labels, lambda_o)), ref), 1e-8);
  }
}

TEST(Mkcf, AlphaStepMatchesDense) {
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ks = testing::random_autocorrelations(rng, 4, 3, 2, 2);
    const Labels labels = gaussian_labels(4, 3, 0.2, 2);
    const std::vector<double> d{0.3, 0.7};
    const auto k = grams(ks);
    const Eigen::MatrixXd kd = d[0] * k[0] + d[1] * k[1] + 1e-2 * Eigen::MatrixXd::Identity(12, 12);
    const Eigen::VectorXd ref = kd.fullPivLu().solve(testing::vec(labels.y));
    EXPECT_LT(testing::rel_err(alpha_of(mkcf_alpha_step(ks, d, labels, 1e-2)), ref), 1e-8);
  }
}

TEST(Mkcf, WeightQuadraticReproducesObjective) {
  Rng rng(33);
  const auto ks = testing::random_autocorrelations(rng, 3, 3, 2, 2);
  const Labels labels = gaussian_labels(3, 3, 0.2, 2);
  const ComplexPlane a = mkcf_alpha_step(ks, std::vector<double>{0.5, 0.5}, labels, 1e-2);
  const WeightQuadratic q = assemble_weight_quadratic(ks, a, labels, 1e-2);
  const auto k = grams(ks);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    const std::vector<double> d{u(rng), u(rng)};
    const double ref = testing::dense_objective(k, alpha_of(a), d, testing::vec(labels.y), 1e-2);
    EXPECT_NEAR(q.value(Eigen::Vector2d(d[0], d[1])), ref, 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST(Mkcf, WeightStepMatchesGoldenSearch) {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const auto ks = testing::random_autocorrelations(rng, 4, 4, 2, 1 + trial % 3);
    const Labels labels = gaussian_labels(4, 4, 0.15, 2);
    const double lambda_o = trial % 2 ? 1e-3 : 0.5;
    const ComplexPlane a = mkcf_alpha_step(ks, std::vector<double>{0.5, 0.5}, labels, lambda_o);
    const auto d = mkcf_d_step(ks, a, labels, lambda_o);
    EXPECT_NEAR(d[0] + d[1], 1.0, 1e-15);
    EXPECT_GE(d[0], 0.0);
    EXPECT_GE(d[1], 0.0);
    const auto k = grams(ks);
    const Eigen::VectorXd y = testing::vec(labels.y);
    const double t = testing::dense_d_search(k, alpha_of(a), y, lambda_o);
    const double golden[2] = {t, 1.0 - t};
    const double f_lib = testing::dense_objective(k, alpha_of(a), d, y, lambda_o);
    const double f_ref = testing::dense_objective(k, alpha_of(a), golden, y, lambda_o);
    EXPECT_LE(f_lib, f_ref + 1e-12 * std::max(1.0, f_ref)) << "trial " << trial;
  }
}

TEST(Mkcf, WeightStepSingleKernelAndLimits) {
  Rng rng(35);
  const auto one = testing::random_autocorrelations(rng, 3, 3, 1, 1);
  const Labels l1 = gaussian_labels(3, 3, 0.2, 1);
  EXPECT_EQ(mkcf_d_step(one, kcf_train(one[0], l1, 1e-3), l1, 1e-3), std::vector<double>{1.0});
  const auto three = testing::random_autocorrelations(rng, 3, 3, 3, 1);
  const Labels l3 = gaussian_labels(3, 3, 0.2, 3);
  EXPECT_THROW(mkcf_d_step(three, kcf_train(three[0], l3, 1e-3), l3, 1e-3), Error);
}

TEST(Mkcf, SpectralObjectiveMatchesDense) {
  Rng rng(36);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ks = testing::random_autocorrelations(rng, 4, 3, 2, 3);
    const Labels labels = gaussian_labels(4, 3, 0.2, 2);
    const std::vector<double> d{0.2, 0.8};
    const ComplexPlane a = mkcf_alpha_step(ks, d, labels, 1e-2);
    const double ref = testing::dense_objective(grams(ks), alpha_of(a), d, testing::vec(labels.y), 1e-2);
    EXPECT_NEAR(spectral_objective(ks, a, d, labels, 1e-2), ref, 1e-10 * std::max(1.0, ref));
    EXPECT_NEAR(objective_F(idft2(a), d, ks, labels, 1e-2), ref, 1e-10 * std::max(1.0, ref));
  }
}

TEST(Mkcf, AlternationDescends) {
  Rng rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const auto ks = testing::random_autocorrelations(rng, 4, 4, 2, 1 + trial % 3);
    const Labels labels = gaussian_labels(4, 4, 0.15, 2);
    const MkcfResult r = mkcf_alternate(ks, labels, 1e-2, 5);
    ASSERT_EQ(r.objective_trace.size(), 10u);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1] + 1e-12 * std::max(1.0, r.objective_trace[i - 1]));
    }
  }
}

TEST(Objectives, UpperBoundDominatesObjective) {
  Rng rng(38);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + trial % 3;
    const auto ks = testing::random_autocorrelations(rng, 3, 4, m, 2);
    const Labels labels = gaussian_labels(3, 4, 0.2, m);
    std::vector<double> d;
    for (int i = 0; i < m; ++i) d.push_back(u(rng));
    const RealPlane alpha = testing::random_plane(rng, 3, 4);
    SolverConfig cfg;
    cfg.kernel_count = m;
    cfg.lambda_o = 0.1;
    const double f = objective_F(alpha, d, ks, labels, cfg.lambda_o);
    const double upper = objective_upper(alpha, d, ks, labels, cfg.lambda());
    EXPECT_LE(f, upper * (1.0 + 1e-12));
  }
}

TEST(Objectives, HistoryWeightsSumToOne) {
  for (double g : {0.01, 0.2, 1.0}) {
    for (int p = 1; p <= 6; ++p) {
      double sum = 0.0;
      for (int j = 1; j <= p; ++j) sum += history_weight(g, j, p);
      EXPECT_NEAR(sum, 1.0, 1e-14);
    }
  }
  EXPECT_THROW(history_weight(0.1, 0, 2), Error);
  EXPECT_THROW(history_weight(0.1, 3, 2), Error);
}

TEST(Objectives, SingleFrameHistoryIsScaledUpperBound) {
  Rng rng(39);
  const auto ks = testing::random_autocorrelations(rng, 3, 3, 2, 2);
  const Labels labels = gaussian_labels(3, 3, 0.2, 2);
  const RealPlane alpha = testing::random_plane(rng, 3, 3);
  const std::vector<double> d{0.4, 0.9};
  const std::vector<double> gamma{0.1, 0.3};
  const std::vector<std::vector<KernelCorrelation>> history{ks};
  const double lambda = 0.02;
  EXPECT_NEAR(objective_Fp(history, gamma, alpha, d, labels, lambda) * 5.0,
              objective_upper(alpha, d, ks, labels, lambda), 1e-12);
}

TEST(Mkcfup, MatchesDenseReplay) {
  Rng rng(40);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 2;
    const int frames = 1 + trial % 4;
    SolverConfig cfg = config_for(rng, m, 1e-3);
    cfg.iters_per_frame = 1 + trial % 3;
    const Labels labels = gaussian_labels(4, 4, 0.15, m);
    std::vector<std::vector<KernelCorrelation>> history;
    std::vector<std::vector<Eigen::MatrixXd>> dense;
    for (int p = 0; p < frames; ++p) {
      history.push_back(testing::random_autocorrelations(rng, 4, 4, m, 2));
      dense.push_back(grams(history.back()));
    }
    const auto ref = testing::dense_mkcfup(dense, testing::vec(labels.y_c), cfg);

    std::vector<MkcfupIteration> trace;
    SolverState s = mkcfup_init(history[0], labels, cfg, &trace);
    for (int p = 1; p < frames; ++p) s = mkcfup_update(s, history[p], labels, cfg, &trace);
    EXPECT_EQ(s.frame, frames);
    ASSERT_EQ(trace.size(), static_cast<std::size_t>(frames * cfg.iters_per_frame));

    const auto& last = ref.back();
    EXPECT_LT(testing::rel_err(alpha_of(s.alpha_spectrum), last.alpha), 1e-8);
    for (int k = 0; k < m; ++k) {
      EXPECT_NEAR(s.d[k], last.d[k], 1e-8 * std::abs(last.d[k]));
      EXPECT_NEAR(s.weight_numerator[k], last.weight_numerator[k], 1e-8 * std::abs(last.weight_numerator[k]));
      EXPECT_NEAR(s.weight_denominator[k], last.weight_denominator[k], 1e-8 * last.weight_denominator[k]);
      const Eigen::VectorXd num = last.numerators[k] * testing::vec(labels.y_c);
      const Eigen::VectorXd lib_num = testing::vec(idft2(s.alpha_numerator[k]));
      EXPECT_LT(testing::rel_err(lib_num, num), 1e-8);
      const RealPlane den_row = testing::plane_from(last.denominators[k].row(0).transpose(), 4, 4);
      const ComplexPlane den = circulant_spectrum(den_row);
      for (std::size_t i = 0; i < den.size(); ++i) {
        EXPECT_NEAR(std::abs(s.alpha_denominator[k][i] - den[i]), 0.0, 1e-8 * std::abs(den[i]));
      }
    }
    std::size_t t = 0;
    for (int p = 0; p < frames; ++p) {
      for (int it = 0; it < cfg.iters_per_frame; ++it, ++t) {
        EXPECT_EQ(trace[t].frame, p + 1);
        EXPECT_EQ(trace[t].iteration, it + 1);
        for (int k = 0; k < m; ++k) {
          const double want = ref[p].d_iterates[it][k];
          EXPECT_NEAR(trace[t].d_out[k], want, 1e-8 * std::abs(want));
        }
      }
    }
  }
}

TEST(Mkcfup, AlphaMatchesBatchObjective) {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const SolverConfig cfg = config_for(rng, 2, 1e-2);
    const Labels labels = gaussian_labels(4, 4, 0.15, 2);
    std::vector<std::vector<Eigen::MatrixXd>> dense;
    std::vector<std::vector<double>> committed;
    SolverState s;
    for (int p = 0; p < 3; ++p) {
      const auto ks = testing::random_autocorrelations(rng, 4, 4, 2, 3);
      dense.push_back(grams(ks));
      s = p == 0 ? mkcfup_init(ks, labels, cfg) : mkcfup_update(s, ks, labels, cfg);
      committed.push_back(s.d);
    }
    const Eigen::VectorXd ref =
        testing::batch_alpha(dense, committed, testing::vec(labels.y_c), cfg.gamma, cfg.lambda());
    EXPECT_LT(testing::rel_err(alpha_of(s.alpha_spectrum), ref), 1e-8);
  }
}

TEST(Mkcfup, FirstFrameWeightIsStationaryPoint) {
  Rng rng(42);
  SolverConfig cfg = config_for(rng, 2, 1e-3);
  cfg.iters_per_frame = 2;
  const auto ks = testing::random_autocorrelations(rng, 4, 3, 2, 2);
  const Labels labels = gaussian_labels(4, 3, 0.2, 2);
  std::vector<MkcfupIteration> trace;
  mkcfup_init(ks, labels, cfg, &trace);
  const auto k = grams(ks);
  const Eigen::VectorXd yc = testing::vec(labels.y_c);
  for (const auto& it : trace) {
    const Eigen::VectorXd a = alpha_of(it.alpha_spectrum);
    for (int m = 0; m < 2; ++m) {
      const Eigen::VectorXd ka = k[m] * a;
      const double want = (ka.dot(yc) - 0.5 * cfg.lambda() * a.dot(ka)) / ka.squaredNorm();
      EXPECT_NEAR(it.d_out[m], want, 1e-9 * std::abs(want));
    }
  }
}

TEST(Mkcfup, IdenticalKernelsGetEqualWeights) {
  Rng rng(43);
  const auto one = testing::random_autocorrelations(rng, 4, 4, 1, 2);
  const std::vector<KernelCorrelation> ks{one[0], one[0]};
  SolverConfig cfg = config_for(rng, 2, 1e-3);
  cfg.gamma = {0.2, 0.2};
  const Labels labels = gaussian_labels(4, 4, 0.15, 2);
  SolverState s = mkcfup_init(ks, labels, cfg);
  s = mkcfup_update(s, ks, labels, cfg);
  EXPECT_NEAR(s.d[0], s.d[1], 1e-12 * s.d[0]);
}

TEST(Mkcfup, DegenerateKernelRaises) {
  SolverConfig cfg;
  const Labels labels = gaussian_labels(4, 4, 0.15, 2);
  KernelCorrelation zero{RealPlane(4, 4, 0.0), 1.0};
  Rng rng(44);
  const auto good = testing::random_autocorrelations(rng, 4, 4, 1, 1);
  const std::vector<KernelCorrelation> ks{good[0], zero};
  try {
    mkcfup_init(ks, labels, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::kDegenerateKernel || e.kind() == ErrorKind::kConditioning);
  }
}

TEST(Mkcfup, ConfigValidation) {
  SolverConfig cfg;
  cfg.gamma = {0.1};
  EXPECT_THROW(cfg.validate(), Error);
  cfg.gamma = {0.1, 1.5};
  EXPECT_THROW(cfg.validate(), Error);
  cfg.gamma = {0.1, 0.1};
  cfg.lambda_o = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_DOUBLE_EQ(SolverConfig{}.lambda(), 1e-3 / 5.0);
  EXPECT_THROW(mkcfup_update(SolverState{}, std::vector<KernelCorrelation>{}, gaussian_labels(2, 2, 0.2, 2),
                             SolverConfig{}),
               Error);
}

TEST(Detect, ArgmaxInvariantUnderWeightScaling) {
  Rng rng(45);
  const auto ks = testing::random_autocorrelations(rng, 8, 8, 2, 2);
  const Labels labels = gaussian_labels(8, 8, 0.1, 2);
  const ComplexPlane a = mkcf_alpha_step(ks, std::vector<double>{0.5, 0.5}, labels, 1e-3);
  const auto z = testing::random_autocorrelations(rng, 8, 8, 2, 2);
  const ResponseMap base = detect(z, a, std::vector<double>{0.3, 0.6});
  const ResponseMap scaled = detect(z, a, std::vector<double>{0.9, 1.8});
  EXPECT_EQ(base.peak_x, scaled.peak_x);
  EXPECT_EQ(base.peak_y, scaled.peak_y);
  EXPECT_NEAR(scaled.peak_value, 3.0 * base.peak_value, 1e-12 * std::abs(scaled.peak_value));
}

TEST(Detect, MatchesDenseResponse) {
  Rng rng(46);
  const auto train = testing::random_autocorrelations(rng, 4, 4, 2, 2);
  const auto test = testing::random_autocorrelations(rng, 4, 4, 2, 2);
  const Labels labels = gaussian_labels(4, 4, 0.15, 2);
  const std::vector<double> d{0.25, 0.75};
  const ComplexPlane a = mkcf_alpha_step(train, d, labels, 1e-3);
  const ResponseMap r = detect(test, a, d);
  const auto k = grams(test);
  const Eigen::VectorXd ref = (d[0] * k[0] + d[1] * k[1]) * alpha_of(a);
  EXPECT_LT(testing::rel_err(testing::vec(r.plane), ref), 1e-10);
}

TEST(LocatePeak, FirstMaximumAndWrap) {
  RealPlane p(6, 4, 0.0);
  p(5, 3) = 2.0;
  p(1, 3) = 2.0;
  ResponseMap r = locate_peak(p);
  EXPECT_EQ(r.peak_x, 1);
  EXPECT_EQ(r.dx, 1);
  EXPECT_EQ(r.dy, -1);
  p(0, 0) = 5.0;
  r = locate_peak(p);
  EXPECT_EQ(r.dx, 0);
  EXPECT_EQ(r.dy, 0);
  RealPlane q(6, 4, 0.0);
  q(3, 2) = 1.0;
  r = locate_peak(q);
  EXPECT_EQ(r.dx, 3);
  EXPECT_EQ(r.dy, 2);
}

}  // namespace
}  // namespace mkcf
