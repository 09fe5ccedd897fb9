#include "mkcf/image_io.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace mkcf {

ImageFrame read_image(const std::filesystem::path& path) {
  cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (raw.empty()) raise(ErrorKind::kIo, "cannot decode image " + path.string());
  if (raw.depth() != CV_8U && raw.depth() != CV_16U) {
    raise(ErrorKind::kIo, "unsupported pixel depth in " + path.string());
  }
  const double scale = raw.depth() == CV_8U ? 1.0 / 255.0 : 1.0 / 65535.0;
  cv::Mat values;
  raw.convertTo(values, CV_64F, scale);

  const int src_channels = values.channels();
  const int channels = src_channels == 1 ? 1 : 3;
  ImageFrame out(values.cols, values.rows, channels);
  for (int y = 0; y < values.rows; ++y) {
    const double* row = values.ptr<double>(y);
    for (int x = 0; x < values.cols; ++x) {
      const double* px = row + static_cast<std::ptrdiff_t>(x) * src_channels;
      if (channels == 1) {
        out.at(x, y) = px[0];
      } else {
        // OpenCV stores BGR(A).
        out.at(x, y, 0) = px[2];
        out.at(x, y, 1) = px[1];
        out.at(x, y, 2) = px[0];
      }
    }
  }
  return out;
}

void write_image(const std::filesystem::path& path, const ImageFrame& image) {
  if (image.empty()) raise(ErrorKind::kInvalidArgument, "write_image: empty image");
  const int type = image.channels() == 1 ? CV_8UC1 : CV_8UC3;
  cv::Mat mat(image.height(), image.width(), type);
  for (int y = 0; y < image.height(); ++y) {
    auto* row = mat.ptr<unsigned char>(y);
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        const int src = image.channels() == 1 ? 0 : 2 - c;
        const double v = std::clamp(image.at(x, y, src), 0.0, 1.0);
        row[x * image.channels() + c] = static_cast<unsigned char>(std::lround(v * 255.0));
      }
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), mat);
  } catch (const cv::Exception& e) {
    raise(ErrorKind::kIo, "cannot encode " + path.string() + ": " + e.what());
  }
  if (!ok) raise(ErrorKind::kIo, "cannot write image " + path.string());
}

bool is_grayscale(const ImageFrame& image) {
  if (image.channels() == 1) return true;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (image.at(x, y, 0) != image.at(x, y, 1) || image.at(x, y, 1) != image.at(x, y, 2)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace mkcf
