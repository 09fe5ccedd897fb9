#pragma once

// 2-D DFT and circulant-matrix algebra on row-major planes.
//
// Flattening convention: cell (x, y) of a width x height plane maps to the
// vector index y * width + x. The i-th 2-D cyclic offset is (i % width,
// i / width) under the same mapping.
//
// Circulant convention: C(f) is the matrix whose row r is f cyclically
// shifted by offset r, i.e. C(f)[r][c] = f[c - r] with 2-D wrap-around.
// Its eigenvalues are conj(dft2(f)) and C(f) v = idft2(conj(dft2(f)) * dft2(v)).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mkcf/errors.hpp"

namespace mkcf {

using Complex = std::complex<double>;

template <typename T>
class Plane {
 public:
  Plane() = default;
  Plane(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      raise(ErrorKind::kInvalidDimension,
            "plane dimensions must be positive, got " + std::to_string(width) + "x" +
                std::to_string(height));
    }
    values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }
  Plane(int width, int height, std::vector<T> values) : Plane(width, height) {
    if (values.size() != values_.size()) {
      raise(ErrorKind::kDimensionMismatch, "value count does not match plane dimensions");
    }
    values_ = std::move(values);
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  T& operator()(int x, int y) { return values_[index(x, y)]; }
  const T& operator()(int x, int y) const { return values_[index(x, y)]; }
  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }
  T* data() noexcept { return values_.data(); }
  const T* data() const noexcept { return values_.data(); }

  bool same_shape(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  template <typename U>
  bool same_shape(const Plane<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

using RealPlane = Plane<double>;
using ComplexPlane = Plane<Complex>;

/// Unnormalized forward 2-D DFT of a real plane.
ComplexPlane dft2(const RealPlane& plane);
ComplexPlane dft2(const ComplexPlane& plane);

/// Normalized inverse 2-D DFT (divides by the cell count). The input must be
/// the spectrum of a real plane: an imaginary residue larger than 1e-6 of the
/// result norm raises kSymmetryViolation.
RealPlane idft2(const ComplexPlane& spectrum);

/// Normalized inverse 2-D DFT keeping the complex result.
ComplexPlane idft2_complex(const ComplexPlane& spectrum);

/// Moves content by (dx, dy): out(x, y) = in(x - dx, y - dy) with wrap-around.
RealPlane cyclic_shift(const RealPlane& plane, int dx, int dy);

/// Eigenvalues of C(first_row), laid out on the DFT grid.
ComplexPlane circulant_spectrum(const RealPlane& first_row);

/// C(first_row) * v evaluated through the spectral product.
RealPlane circulant_matvec(const RealPlane& first_row, const RealPlane& v);

/// Largest plane (in cells) accepted by the dense materializing helpers.
inline constexpr std::size_t kOracleMaxCells = 4096;

/// Materializes C(first_row) densely. Intended for oracle-scale checks only.
Eigen::MatrixXd build_circulant(const RealPlane& first_row);

Eigen::VectorXd flatten(const RealPlane& plane);
RealPlane unflatten(const Eigen::VectorXd& v, int width, int height);

// Element-wise helpers used throughout the solvers.
ComplexPlane hadamard(const ComplexPlane& a, const ComplexPlane& b);
ComplexPlane conj(const ComplexPlane& a);
double dot(const RealPlane& a, const RealPlane& b);
double squared_norm(const RealPlane& a);

}  // namespace mkcf
