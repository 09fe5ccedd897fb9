#include "mkcf/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace mkcf {

ImageFrame::ImageFrame(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0) {
    raise(ErrorKind::kInvalidDimension, "image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    raise(ErrorKind::kInvalidArgument,
          "image must have 1 or 3 channels, got " + std::to_string(channels));
  }
  values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                     static_cast<std::size_t>(channels),
                 fill);
}

ImageFrame::ImageFrame(int width, int height, int channels, std::vector<double> values)
    : ImageFrame(width, height, channels) {
  if (values.size() != values_.size()) {
    raise(ErrorKind::kDimensionMismatch, "image value count does not match dimensions");
  }
  values_ = std::move(values);
}

FeatureMap::FeatureMap(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  if (width <= 0 || height <= 0 || channels <= 0) {
    raise(ErrorKind::kInvalidDimension, "feature map dimensions must be positive");
  }
  values_.assign(cells() * static_cast<std::size_t>(channels), fill);
}

RealPlane FeatureMap::channel(int c) const {
  RealPlane out(width_, height_);
  const auto offset = static_cast<std::size_t>(c) * cells();
  std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(offset), cells(), out.data());
  return out;
}

namespace {

double clamp_index_sample(const ImageFrame& f, int x, int y, int c) {
  x = std::clamp(x, 0, f.width() - 1);
  y = std::clamp(y, 0, f.height() - 1);
  return f.at(x, y, c);
}

void require_cell_grid(const ImageFrame& patch, int cell, const char* what) {
  if (cell <= 0 || patch.width() % cell != 0 || patch.height() % cell != 0) {
    raise(ErrorKind::kInvalidDimension,
          std::string(what) + ": patch " + std::to_string(patch.width()) + "x" +
              std::to_string(patch.height()) + " is not divisible by cell " +
              std::to_string(cell));
  }
}

double luminance(const ImageFrame& img, int x, int y) {
  if (img.channels() == 1) return img.at(x, y);
  return 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
}

}  // namespace

ImageFrame extract_patch(const ImageFrame& frame, const BoundingBox& box, double search_factor,
                         PixelSize out) {
  if (!box.valid()) raise(ErrorKind::kInvalidArgument, "extract_patch: degenerate box");
  if (search_factor < 1.0) {
    raise(ErrorKind::kInvalidArgument, "extract_patch: search_factor must be >= 1");
  }
  if (out.width <= 0 || out.height <= 0) {
    raise(ErrorKind::kInvalidDimension, "extract_patch: empty output size");
  }
  if (box.x + box.w <= 0.0 || box.y + box.h <= 0.0 || box.x >= frame.width() ||
      box.y >= frame.height()) {
    raise(ErrorKind::kOutOfFrame, "extract_patch: box lies entirely outside the frame");
  }

  const double region_w = box.w * search_factor;
  const double region_h = box.h * search_factor;
  const double x0 = box.center_x() - 0.5 * region_w;
  const double y0 = box.center_y() - 0.5 * region_h;
  const double sx = region_w / out.width;
  const double sy = region_h / out.height;

  ImageFrame patch(out.width, out.height, frame.channels());
  for (int v = 0; v < out.height; ++v) {
    const double fy = y0 + (v + 0.5) * sy - 0.5;
    const double y_floor = std::floor(fy);
    const double ty = fy - y_floor;
    const int yi = static_cast<int>(y_floor);
    for (int u = 0; u < out.width; ++u) {
      const double fx = x0 + (u + 0.5) * sx - 0.5;
      const double x_floor = std::floor(fx);
      const double tx = fx - x_floor;
      const int xi = static_cast<int>(x_floor);
      for (int c = 0; c < frame.channels(); ++c) {
        const double a = clamp_index_sample(frame, xi, yi, c);
        const double b = clamp_index_sample(frame, xi + 1, yi, c);
        const double d = clamp_index_sample(frame, xi, yi + 1, c);
        const double e = clamp_index_sample(frame, xi + 1, yi + 1, c);
        patch.at(u, v, c) = (1.0 - ty) * ((1.0 - tx) * a + tx * b) + ty * ((1.0 - tx) * d + tx * e);
      }
    }
  }
  return patch;
}

ImageFrame to_gray(const ImageFrame& image) {
  if (image.channels() == 1) return image;
  ImageFrame gray(image.width(), image.height(), 1);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) gray.at(x, y) = luminance(image, x, y);
  }
  return gray;
}

FeatureMap hog(const ImageFrame& patch, int cell, int orientations) {
  require_cell_grid(patch, cell, "hog");
  if (orientations <= 0) raise(ErrorKind::kInvalidArgument, "hog: orientations must be positive");

  const int w = patch.width();
  const int h = patch.height();
  const ImageFrame gray = to_gray(patch);
  FeatureMap fm(w / cell, h / cell, orientations);
  const double bin_width = std::numbers::pi / orientations;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double gx = clamp_index_sample(gray, x + 1, y, 0) - clamp_index_sample(gray, x - 1, y, 0);
      const double gy = clamp_index_sample(gray, x, y + 1, 0) - clamp_index_sample(gray, x, y - 1, 0);
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0.0) theta += std::numbers::pi;
      if (theta >= std::numbers::pi) theta -= std::numbers::pi;
      const double pos = theta / bin_width;
      const int lo = static_cast<int>(std::floor(pos)) % orientations;
      const int hi = (lo + 1) % orientations;
      const double frac = pos - std::floor(pos);
      fm.at(x / cell, y / cell, lo) += mag * (1.0 - frac);
      fm.at(x / cell, y / cell, hi) += mag * frac;
    }
  }

  constexpr double kEps = 1e-2;
  constexpr double kClip = 0.2;
  std::vector<double> hist(static_cast<std::size_t>(orientations));
  for (int cy = 0; cy < fm.height(); ++cy) {
    for (int cx = 0; cx < fm.width(); ++cx) {
      double norm = 0.0;
      for (int o = 0; o < orientations; ++o) {
        hist[o] = fm.at(cx, cy, o);
        norm += hist[o] * hist[o];
      }
      norm = std::sqrt(norm + kEps);
      double renorm = 0.0;
      for (double& v : hist) {
        v = std::min(v / norm, kClip);
        renorm += v * v;
      }
      renorm = std::sqrt(renorm + kEps);
      for (int o = 0; o < orientations; ++o) fm.at(cx, cy, o) = hist[o] / renorm;
    }
  }
  return fm;
}

FeatureMap color_names(const ImageFrame& patch, const ColorNameTable& table, int cell) {
  if (patch.channels() != 3) {
    raise(ErrorKind::kUnsupportedFeature, "color_names requires a 3-channel patch");
  }
  require_cell_grid(patch, cell, "color_names");
  FeatureMap fm(patch.width() / cell, patch.height() / cell, kColorNameChannels);
  const double inv_area = 1.0 / (cell * cell);
  for (int y = 0; y < patch.height(); ++y) {
    for (int x = 0; x < patch.width(); ++x) {
      const auto probs = table.lookup(patch.at(x, y, 0), patch.at(x, y, 1), patch.at(x, y, 2));
      for (int c = 0; c < kColorNameChannels; ++c) fm.at(x / cell, y / cell, c) += probs[c] * inv_area;
    }
  }
  return fm;
}

FeatureMap rgb_cells(const ImageFrame& patch, int cell) {
  if (patch.channels() != 3) raise(ErrorKind::kUnsupportedFeature, "rgb_cells requires RGB");
  require_cell_grid(patch, cell, "rgb_cells");
  FeatureMap fm(patch.width() / cell, patch.height() / cell, 3);
  const double inv_area = 1.0 / (cell * cell);
  for (int y = 0; y < patch.height(); ++y) {
    for (int x = 0; x < patch.width(); ++x) {
      for (int c = 0; c < 3; ++c) fm.at(x / cell, y / cell, c) += patch.at(x, y, c) * inv_area;
    }
  }
  return fm;
}

FeatureMap gray_feature(const ImageFrame& patch, int cell) {
  if (patch.channels() != 1) {
    raise(ErrorKind::kUnsupportedFeature, "gray_feature requires a 1-channel patch");
  }
  require_cell_grid(patch, cell, "gray_feature");
  double mean = 0.0;
  for (double v : patch.values()) mean += v;
  mean /= static_cast<double>(patch.values().size());

  FeatureMap fm(patch.width() / cell, patch.height() / cell, 1);
  const double inv_area = 1.0 / (cell * cell);
  for (int y = 0; y < patch.height(); ++y) {
    for (int x = 0; x < patch.width(); ++x) {
      fm.at(x / cell, y / cell, 0) += (patch.at(x, y) - mean) * inv_area;
    }
  }
  return fm;
}

PcaBasis fit_pca(std::span<const FeatureMap> samples, int output_dim) {
  if (samples.empty()) raise(ErrorKind::kInvalidArgument, "fit_pca: no samples");
  const int dim = samples.front().channels();
  if (output_dim <= 0 || output_dim > dim) {
    raise(ErrorKind::kInvalidArgument, "fit_pca: output_dim must lie in [1, input channels]");
  }
  std::size_t total_cells = 0;
  for (const auto& s : samples) {
    if (s.channels() != dim) raise(ErrorKind::kDimensionMismatch, "fit_pca: channel mismatch");
    total_cells += s.cells();
  }
  if (total_cells < static_cast<std::size_t>(dim)) {
    raise(ErrorKind::kInvalidArgument, "fit_pca: fewer cells than channels");
  }

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& s : samples) {
    for (int c = 0; c < dim; ++c) {
      const auto plane = s.values().subspan(static_cast<std::size_t>(c) * s.cells(), s.cells());
      for (double v : plane) mean(c) += v;
    }
  }
  mean /= static_cast<double>(total_cells);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd v(dim);
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < s.cells(); ++i) {
      for (int c = 0; c < dim; ++c) v(c) = s.values()[static_cast<std::size_t>(c) * s.cells() + i] - mean(c);
      cov.noalias() += v * v.transpose();
    }
  }
  cov /= static_cast<double>(total_cells);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) raise(ErrorKind::kNumerical, "fit_pca: eigen-decomposition failed");

  PcaBasis basis;
  basis.input_dim = dim;
  basis.output_dim = output_dim;
  basis.mean = mean;
  basis.projection.resize(output_dim, dim);
  basis.variances.resize(output_dim);
  const Eigen::VectorXd& values = eig.eigenvalues();  // ascending
  const double top = std::max(values(dim - 1), 0.0);
  int rank = 0;
  for (int i = 0; i < dim; ++i) {
    if (values(i) > 1e-10 * top && top > 0.0) ++rank;
  }
  for (int r = 0; r < output_dim; ++r) {
    Eigen::VectorXd axis = eig.eigenvectors().col(dim - 1 - r);
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0.0) axis = -axis;
    basis.projection.row(r) = axis.transpose();
    basis.variances(r) = std::max(values(dim - 1 - r), 0.0);
  }
  basis.rank = rank;
  basis.low_rank = rank < output_dim;
  return basis;
}

FeatureMap pca_reduce(const FeatureMap& fm, const PcaBasis& basis) {
  if (fm.channels() != basis.input_dim) {
    raise(ErrorKind::kDimensionMismatch, "pca_reduce: feature channels " +
                                             std::to_string(fm.channels()) + " vs basis input " +
                                             std::to_string(basis.input_dim));
  }
  FeatureMap out(fm.width(), fm.height(), basis.output_dim);
  const std::size_t n = fm.cells();
  Eigen::VectorXd v(basis.input_dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < basis.input_dim; ++c) {
      v(c) = fm.values()[static_cast<std::size_t>(c) * n + i] - basis.mean(c);
    }
    const Eigen::VectorXd p = basis.projection * v;
    for (int r = 0; r < basis.output_dim; ++r) out.values()[static_cast<std::size_t>(r) * n + i] = p(r);
  }
  return out;
}

std::vector<double> hann_window(int n) {
  if (n < 2) raise(ErrorKind::kInvalidDimension, "hann window needs at least 2 samples");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
  }
  // cos() does not return exactly 1 at the endpoints for every n.
  w.front() = 0.0;
  w.back() = 0.0;
  return w;
}

FeatureMap hann_band(const FeatureMap& fm) {
  const auto wx = hann_window(fm.width());
  const auto wy = hann_window(fm.height());
  FeatureMap out = fm;
  for (int c = 0; c < fm.channels(); ++c) {
    for (int y = 0; y < fm.height(); ++y) {
      for (int x = 0; x < fm.width(); ++x) out.at(x, y, c) *= wx[x] * wy[y];
    }
  }
  return out;
}

}  // namespace mkcf
