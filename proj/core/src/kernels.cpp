#include "mkcf/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace mkcf {

KernelCorrelation gaussian_correlation(const FeatureMap& x, const FeatureMap& z, double sigma) {
  if (!(sigma > 0.0)) raise(ErrorKind::kInvalidArgument, "gaussian_correlation: sigma must be > 0");
  if (!x.same_shape(z)) {
    raise(ErrorKind::kDimensionMismatch, "gaussian_correlation: feature maps differ in shape");
  }
  const int w = x.width();
  const int h = x.height();
  ComplexPlane cross(w, h);
  for (int c = 0; c < x.channels(); ++c) {
    const ComplexPlane xf = dft2(x.channel(c));
    const ComplexPlane zf = dft2(z.channel(c));
    for (std::size_t i = 0; i < cross.size(); ++i) cross[i] += std::conj(zf[i]) * xf[i];
  }
  const RealPlane cc = idft2(cross);

  double xx = 0.0;
  for (double v : x.values()) xx += v * v;
  double zz = 0.0;
  for (double v : z.values()) zz += v * v;

  const double scale = sigma * sigma * static_cast<double>(x.cells()) * x.channels();
  KernelCorrelation k{RealPlane(w, h), sigma};
  for (std::size_t i = 0; i < cc.size(); ++i) {
    k.plane[i] = std::exp(-std::max(0.0, xx + zz - 2.0 * cc[i]) / scale);
  }
  return k;
}

Eigen::MatrixXd kernel_row_to_gram(const KernelCorrelation& k) { return build_circulant(k.plane); }

}  // namespace mkcf
