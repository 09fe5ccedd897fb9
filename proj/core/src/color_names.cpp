#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "mkcf/features.hpp"

namespace mkcf {

namespace {

constexpr std::size_t kTableValues =
    static_cast<std::size_t>(ColorNameTable::kRows) * kColorNameChannels;

int quantize(double v) {
  const int level = static_cast<int>(std::floor(std::clamp(v, 0.0, 1.0) * 255.0));
  return level >> 3;
}

std::vector<double> read_binary(std::ifstream& in) {
  std::vector<double> values(kTableValues);
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  return values;
}

std::vector<double> read_text(std::ifstream& in, const std::filesystem::path& path) {
  std::vector<double> values;
  values.reserve(kTableValues);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    double v = 0.0;
    int count = 0;
    while (fields >> v) {
      values.push_back(v);
      ++count;
    }
    if (!fields.eof()) {
      raise(ErrorKind::kParse, path.string() + ":" + std::to_string(line_no) + ": not a number");
    }
    if (count != 0 && count != kColorNameChannels) {
      raise(ErrorKind::kParse, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                   std::to_string(kColorNameChannels) + " values, got " +
                                   std::to_string(count));
    }
  }
  return values;
}

}  // namespace

ColorNameTable::ColorNameTable(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() != kTableValues) {
    raise(ErrorKind::kInvalidArgument, "color-name table must hold 32768 x 11 values, got " +
                                           std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      raise(ErrorKind::kInvalidArgument, "color-name probabilities must lie in [0, 1]");
    }
  }
}

ColorNameTable ColorNameTable::load(const std::filesystem::path& path) {
  std::error_code ec;
  const auto bytes = std::filesystem::file_size(path, ec);
  if (ec) raise(ErrorKind::kIo, "cannot stat color-name table " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::kIo, "cannot open color-name table " + path.string());
  if (bytes == kTableValues * sizeof(double)) return ColorNameTable(read_binary(in));
  return ColorNameTable(read_text(in, path));
}

int ColorNameTable::row_index(double r, double g, double b) {
  return quantize(r) * 1024 + quantize(g) * 32 + quantize(b);
}

std::span<const double, kColorNameChannels> ColorNameTable::row(int index) const {
  if (index < 0 || index >= kRows) raise(ErrorKind::kInvalidArgument, "color-name row out of range");
  return std::span<const double, kColorNameChannels>(
      values_.data() + static_cast<std::size_t>(index) * kColorNameChannels, kColorNameChannels);
}

}  // namespace mkcf
