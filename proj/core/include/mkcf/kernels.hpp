#pragma once

#include <Eigen/Dense>

#include "mkcf/features.hpp"
#include "mkcf/spectral.hpp"

namespace mkcf {

/// First row of a circulant Gram matrix: plane(i) = k(z, x shifted by -i).
///
/// The sign is chosen so that C(plane) * alpha places the detection peak at
/// +d when the test patch is the template displaced by +d.
struct KernelCorrelation {
  RealPlane plane;
  double sigma = 0.0;
};

/// Gaussian kernel over all 2-D cyclic shifts:
/// k_i = exp(-max(0, |x|^2 + |z|^2 - 2 cc_i) / (sigma^2 * N * C)),
/// N = cells, C = channels, cc_i = channel-summed circular cross-correlation.
KernelCorrelation gaussian_correlation(const FeatureMap& x, const FeatureMap& z, double sigma);

/// Materializes C(k) through build_circulant; oracle scale only.
Eigen::MatrixXd kernel_row_to_gram(const KernelCorrelation& k);

}  // namespace mkcf
