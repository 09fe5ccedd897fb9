#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mkcf/spectral.hpp"

namespace mkcf {

inline constexpr int kCellSize = 4;
inline constexpr int kHogOrientations = 9;
inline constexpr int kColorNameChannels = 11;
inline constexpr int kPcaDimensions = 4;

/// Interleaved image with intensities in [0, 1]; 1 (gray) or 3 (RGB) channels.
class ImageFrame {
 public:
  ImageFrame() = default;
  ImageFrame(int width, int height, int channels, double fill = 0.0);
  ImageFrame(int width, int height, int channels, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return values_.empty(); }

  double& at(int x, int y, int c = 0) { return values_[index(x, y, c)]; }
  double at(int x, int y, int c = 0) const { return values_[index(x, y, c)]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const ImageFrame&, const ImageFrame&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               static_cast<std::size_t>(channels_) +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

/// Axis-aligned box in pixels; (x, y) is the 0-indexed top-left corner.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double center_x() const noexcept { return x + 0.5 * w; }
  double center_y() const noexcept { return y + 0.5 * h; }
  bool valid() const noexcept { return w > 0.0 && h > 0.0; }

  static BoundingBox from_center(double cx, double cy, double w, double h) {
    return {cx - 0.5 * w, cy - 0.5 * h, w, h};
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct PixelSize {
  int width = 0;
  int height = 0;

  friend bool operator==(const PixelSize&, const PixelSize&) = default;
};

/// Multi-channel cell grid stored channel-planar.
class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int width, int height, int channels, double fill = 0.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t cells() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return values_.empty(); }

  double& at(int x, int y, int c) { return values_[index(x, y, c)]; }
  double at(int x, int y, int c) const { return values_[index(x, y, c)]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  RealPlane channel(int c) const;
  bool same_shape(const FeatureMap& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return static_cast<std::size_t>(c) * cells() +
           static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

struct PcaBasis {
  int input_dim = 0;
  int output_dim = 0;
  Eigen::MatrixXd projection;  // output_dim x input_dim, orthonormal rows
  Eigen::VectorXd mean;        // input_dim
  Eigen::VectorXd variances;   // eigenvalue per output row
  int rank = 0;
  bool low_rank = false;
};

/// 32x32x32 quantized-RGB to 11 color-name probabilities.
///
/// Row index is r_q * 1024 + g_q * 32 + b_q where each component is
/// quantized to 5 bits (floor(v * 255) >> 3). Files are either text (32768
/// lines of 11 whitespace-separated reals, '#' comments allowed) or raw
/// little-endian float64 (exactly 32768 * 11 * 8 bytes).
class ColorNameTable {
 public:
  static constexpr int kRows = 32 * 32 * 32;

  explicit ColorNameTable(std::vector<double> values);
  static ColorNameTable load(const std::filesystem::path& path);

  static int row_index(double r, double g, double b);
  std::span<const double, kColorNameChannels> row(int index) const;
  std::span<const double, kColorNameChannels> lookup(double r, double g, double b) const {
    return row(row_index(r, g, b));
  }

 private:
  std::vector<double> values_;
};

/// Crops search_factor times the box around its center, replicating edge
/// pixels outside the frame, and bilinearly resamples to `out` pixels.
ImageFrame extract_patch(const ImageFrame& frame, const BoundingBox& box, double search_factor,
                         PixelSize out);

ImageFrame to_gray(const ImageFrame& image);

/// Cell histogram-of-gradients: unsigned orientations, linear soft binning
/// between neighboring bin centers (bin b centered at b*180/orientations
/// degrees), per-cell L2 normalization clipped at 0.2 and renormalized.
FeatureMap hog(const ImageFrame& patch, int cell = kCellSize,
               int orientations = kHogOrientations);

/// Per-pixel color-name probabilities averaged over cells.
FeatureMap color_names(const ImageFrame& patch, const ColorNameTable& table,
                       int cell = kCellSize);

/// Cell-averaged RGB; used when no color-name table is configured.
FeatureMap rgb_cells(const ImageFrame& patch, int cell = kCellSize);

/// Intensity minus its patch mean, cell-averaged.
FeatureMap gray_feature(const ImageFrame& patch, int cell = kCellSize);

PcaBasis fit_pca(std::span<const FeatureMap> samples, int output_dim = kPcaDimensions);
FeatureMap pca_reduce(const FeatureMap& fm, const PcaBasis& basis);

/// 0.5 * (1 - cos(2 pi i / (n - 1))), i = 0..n-1.
std::vector<double> hann_window(int n);
FeatureMap hann_band(const FeatureMap& fm);

}  // namespace mkcf
