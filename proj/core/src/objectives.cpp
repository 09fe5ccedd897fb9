#include <cmath>
#include <string>

#include "mkcf/solvers.hpp"

namespace mkcf {

namespace {

void check_inputs(const RealPlane& alpha, std::span<const double> d,
                  std::span<const KernelCorrelation> ks, const Labels& labels) {
  if (ks.empty() || d.size() != ks.size()) {
    raise(ErrorKind::kDimensionMismatch, "objective: need one weight per kernel");
  }
  if (!alpha.same_shape(labels.y)) raise(ErrorKind::kDimensionMismatch, "objective: alpha shape");
  for (const auto& k : ks) {
    if (!k.plane.same_shape(labels.y)) {
      raise(ErrorKind::kDimensionMismatch, "objective: kernel shape");
    }
  }
}

}  // namespace

double objective_F(const RealPlane& alpha, std::span<const double> d,
                   std::span<const KernelCorrelation> ks, const Labels& labels, double lambda_o) {
  check_inputs(alpha, d, ks, labels);
  const Eigen::VectorXd a = flatten(alpha);
  const Eigen::VectorXd y = flatten(labels.y);
  Eigen::VectorXd k_alpha = Eigen::VectorXd::Zero(a.size());
  for (std::size_t m = 0; m < ks.size(); ++m) k_alpha += d[m] * (kernel_row_to_gram(ks[m]) * a);
  return 0.5 * (y - k_alpha).squaredNorm() + 0.5 * lambda_o * a.dot(k_alpha);
}

double objective_upper(const RealPlane& alpha, std::span<const double> d,
                       std::span<const KernelCorrelation> ks, const Labels& labels, double lambda) {
  check_inputs(alpha, d, ks, labels);
  const double mu = 2.0 * static_cast<double>(ks.size()) + 1.0;
  const Eigen::VectorXd a = flatten(alpha);
  const Eigen::VectorXd yc = flatten(labels.y) / static_cast<double>(ks.size());
  double total = 0.0;
  for (std::size_t m = 0; m < ks.size(); ++m) {
    const Eigen::VectorXd k_alpha = kernel_row_to_gram(ks[m]) * a;
    total += (yc - d[m] * k_alpha).squaredNorm() + lambda * d[m] * a.dot(k_alpha);
  }
  return 0.5 * mu * total;
}

double history_weight(double gamma, int j, int p) {
  if (p < 1 || j < 1 || j > p) {
    raise(ErrorKind::kInvalidArgument, "history_weight: need 1 <= j <= p");
  }
  if (j == 1) return std::pow(1.0 - gamma, p - 1);
  return gamma * std::pow(1.0 - gamma, p - j);
}

double objective_Fp(std::span<const std::vector<KernelCorrelation>> history,
                    std::span<const double> gamma, const RealPlane& alpha,
                    std::span<const double> d, const Labels& labels, double lambda) {
  if (history.empty()) raise(ErrorKind::kInvalidArgument, "objective_Fp: empty history");
  if (gamma.size() != d.size()) {
    raise(ErrorKind::kDimensionMismatch, "objective_Fp: need one learning rate per kernel");
  }
  const int p = static_cast<int>(history.size());
  const Eigen::VectorXd a = flatten(alpha);
  const Eigen::VectorXd yc = flatten(labels.y) / static_cast<double>(d.size());
  double total = 0.0;
  for (int j = 1; j <= p; ++j) {
    const auto& frame = history[static_cast<std::size_t>(j - 1)];
    check_inputs(alpha, d, frame, labels);
    for (std::size_t m = 0; m < frame.size(); ++m) {
      const Eigen::VectorXd k_alpha = kernel_row_to_gram(frame[m]) * a;
      const double term = (yc - d[m] * k_alpha).squaredNorm() + lambda * d[m] * a.dot(k_alpha);
      total += history_weight(gamma[m], j, p) * term;
    }
  }
  return 0.5 * total;
}

}  // namespace mkcf
