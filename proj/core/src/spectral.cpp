#include "mkcf/spectral.hpp"

#include <cmath>
#include <string>

#include <opencv2/core.hpp>

namespace mkcf {
namespace {

void require_nonempty(int width, int height, const char* what) {
  if (width <= 0 || height <= 0) {
    raise(ErrorKind::kInvalidDimension, std::string(what) + ": zero-sized plane");
  }
}

ComplexPlane transform(const ComplexPlane& in, int flags) {
  require_nonempty(in.width(), in.height(), "dft");
  // std::complex<double> is layout-compatible with two doubles.
  const cv::Mat src(in.height(), in.width(), CV_64FC2,
                    const_cast<Complex*>(in.data()));
  ComplexPlane out(in.width(), in.height());
  cv::Mat dst(out.height(), out.width(), CV_64FC2, out.data());
  cv::dft(src, dst, flags);
  return out;
}

int wrap(int v, int n) {
  const int r = v % n;
  return r < 0 ? r + n : r;
}

}  // namespace

ComplexPlane dft2(const RealPlane& plane) {
  require_nonempty(plane.width(), plane.height(), "dft2");
  ComplexPlane in(plane.width(), plane.height());
  for (std::size_t i = 0; i < plane.size(); ++i) in[i] = Complex(plane[i], 0.0);
  return transform(in, 0);
}

ComplexPlane dft2(const ComplexPlane& plane) { return transform(plane, 0); }

ComplexPlane idft2_complex(const ComplexPlane& spectrum) {
  return transform(spectrum, cv::DFT_INVERSE | cv::DFT_SCALE);
}

RealPlane idft2(const ComplexPlane& spectrum) {
  const ComplexPlane full = idft2_complex(spectrum);
  RealPlane out(full.width(), full.height());
  double real_norm = 0.0;
  double imag_norm = 0.0;
  for (std::size_t i = 0; i < full.size(); ++i) {
    out[i] = full[i].real();
    real_norm += full[i].real() * full[i].real();
    imag_norm += full[i].imag() * full[i].imag();
  }
  const double total = std::sqrt(real_norm + imag_norm);
  if (std::sqrt(imag_norm) > 1e-6 * total) {
    raise(ErrorKind::kSymmetryViolation,
          "inverse transform has imaginary residue " + std::to_string(std::sqrt(imag_norm)) +
              " against norm " + std::to_string(total));
  }
  return out;
}

RealPlane cyclic_shift(const RealPlane& plane, int dx, int dy) {
  RealPlane out(plane.width(), plane.height());
  for (int y = 0; y < plane.height(); ++y) {
    for (int x = 0; x < plane.width(); ++x) {
      out(x, y) = plane(wrap(x - dx, plane.width()), wrap(y - dy, plane.height()));
    }
  }
  return out;
}

ComplexPlane circulant_spectrum(const RealPlane& first_row) { return conj(dft2(first_row)); }

RealPlane circulant_matvec(const RealPlane& first_row, const RealPlane& v) {
  if (!first_row.same_shape(v)) {
    raise(ErrorKind::kDimensionMismatch, "circulant_matvec: first row and vector differ in shape");
  }
  return idft2(hadamard(circulant_spectrum(first_row), dft2(v)));
}

Eigen::MatrixXd build_circulant(const RealPlane& first_row) {
  require_nonempty(first_row.width(), first_row.height(), "build_circulant");
  if (first_row.size() > kOracleMaxCells) {
    raise(ErrorKind::kOracleScale, "build_circulant: plane has " +
                                       std::to_string(first_row.size()) + " cells, limit " +
                                       std::to_string(kOracleMaxCells));
  }
  const int w = first_row.width();
  const int h = first_row.height();
  const auto n = static_cast<Eigen::Index>(first_row.size());
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int rx = static_cast<int>(r % w);
    const int ry = static_cast<int>(r / w);
    for (Eigen::Index col = 0; col < n; ++col) {
      const int cx = static_cast<int>(col % w);
      const int cy = static_cast<int>(col / w);
      c(r, col) = first_row(wrap(cx - rx, w), wrap(cy - ry, h));
    }
  }
  return c;
}

Eigen::VectorXd flatten(const RealPlane& plane) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(plane.size()));
  for (std::size_t i = 0; i < plane.size(); ++i) v(static_cast<Eigen::Index>(i)) = plane[i];
  return v;
}

RealPlane unflatten(const Eigen::VectorXd& v, int width, int height) {
  RealPlane out(width, height);
  if (static_cast<std::size_t>(v.size()) != out.size()) {
    raise(ErrorKind::kDimensionMismatch, "unflatten: vector length does not match plane");
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v(static_cast<Eigen::Index>(i));
  return out;
}

ComplexPlane hadamard(const ComplexPlane& a, const ComplexPlane& b) {
  if (!a.same_shape(b)) raise(ErrorKind::kDimensionMismatch, "hadamard: shape mismatch");
  ComplexPlane out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

ComplexPlane conj(const ComplexPlane& a) {
  ComplexPlane out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::conj(a[i]);
  return out;
}

double dot(const RealPlane& a, const RealPlane& b) {
  if (!a.same_shape(b)) raise(ErrorKind::kDimensionMismatch, "dot: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(const RealPlane& a) { return dot(a, a); }

}  // namespace mkcf
