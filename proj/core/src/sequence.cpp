#include "mkcf/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mkcf/image_io.hpp"

namespace mkcf {

namespace {

std::vector<double> split_numbers(std::string line, const std::string& origin, std::size_t line_no) {
  std::replace_if(line.begin(), line.end(), [](char c) { return c == ',' || c == '\t' || c == ';'; },
                  ' ');
  std::istringstream fields(line);
  std::vector<double> out;
  std::string token;
  while (fields >> token) {
    double v = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end) {
      raise(ErrorKind::kParse, origin + ":" + std::to_string(line_no) + ": bad number '" + token + "'");
    }
    out.push_back(v);
  }
  return out;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

bool is_frame_file(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext != ".jpg" && ext != ".jpeg" && ext != ".png" && ext != ".bmp") return false;
  const std::string stem = p.stem().string();
  return !stem.empty() &&
         std::all_of(stem.begin(), stem.end(), [](unsigned char c) { return std::isdigit(c); });
}

ImageFrame gray_of(const ImageFrame& f) {
  if (f.channels() == 1) return f;
  ImageFrame out(f.width(), f.height(), 1);
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) out.at(x, y) = f.at(x, y, 0);
  }
  return out;
}

}  // namespace

ImageFrame Sequence::frame(int i) const {
  if (i < 0 || i >= size()) raise(ErrorKind::kSequence, "frame index out of range");
  ImageFrame f = frames.empty() ? read_image(frame_paths.at(static_cast<std::size_t>(i)))
                                : frames.at(static_cast<std::size_t>(i));
  if (color_mode == ColorMode::kGray) return gray_of(f);
  return f;
}

FrameSource Sequence::source() const {
  return {size(), [this](int i) { return frame(i); }};
}

std::vector<BoundingBox> parse_groundtruth(std::istream& in, const std::string& origin) {
  std::vector<BoundingBox> boxes;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto v = split_numbers(line, origin, line_no);
    if (v.size() != 4) {
      raise(ErrorKind::kParse, origin + ":" + std::to_string(line_no) + ": expected 4 values, got " +
                                   std::to_string(v.size()));
    }
    boxes.push_back({v[0] - 1.0, v[1] - 1.0, v[2], v[3]});
  }
  return boxes;
}

std::vector<FrameSpan> parse_spans(std::istream& in, const std::string& origin) {
  std::vector<FrameSpan> spans;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto v = split_numbers(line, origin, line_no);
    if (v.size() != 2 || v[0] < 1 || v[1] < v[0] || v[0] != std::floor(v[0]) ||
        v[1] != std::floor(v[1])) {
      raise(ErrorKind::kParse, origin + ":" + std::to_string(line_no) +
                                   ": expected 'start,end' with 1 <= start <= end");
    }
    spans.push_back({static_cast<int>(v[0]), static_cast<int>(v[1])});
  }
  return spans;
}

Sequence load_otb_sequence(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  Sequence seq;
  seq.name = dir.filename().string();
  if (seq.name.empty()) seq.name = dir.parent_path().filename().string();

  const fs::path gt_path = dir / "groundtruth_rect.txt";
  std::ifstream gt(gt_path);
  if (!gt) raise(ErrorKind::kIo, "missing ground-truth file " + gt_path.string());
  std::vector<BoundingBox> boxes = parse_groundtruth(gt, gt_path.string());

  const fs::path img_dir = dir / "img";
  std::error_code ec;
  if (!fs::is_directory(img_dir, ec)) raise(ErrorKind::kIo, "missing image folder " + img_dir.string());
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(img_dir)) {
    if (entry.is_regular_file() && is_frame_file(entry.path())) paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end(), [](const fs::path& a, const fs::path& b) {
    return std::stoull(a.stem().string()) < std::stoull(b.stem().string());
  });
  if (paths.empty()) raise(ErrorKind::kIo, "no numbered frames in " + img_dir.string());

  if (paths.size() != boxes.size()) {
    const std::size_t n = std::min(paths.size(), boxes.size());
    seq.warnings.push_back(std::to_string(paths.size()) + " frames but " +
                           std::to_string(boxes.size()) + " ground-truth boxes; truncated to " +
                           std::to_string(n));
    paths.resize(n);
    boxes.resize(n);
  }
  if (boxes.empty()) raise(ErrorKind::kSequence, "sequence " + seq.name + " has no frames");
  seq.frame_paths = std::move(paths);
  seq.groundtruth = std::move(boxes);

  const fs::path occ_path = dir / "occlusion.txt";
  if (fs::exists(occ_path, ec)) {
    std::ifstream occ(occ_path);
    if (!occ) raise(ErrorKind::kIo, "cannot read " + occ_path.string());
    seq.occlusions = parse_spans(occ, occ_path.string());
  }

  seq.color_mode = is_grayscale(read_image(seq.frame_paths.front())) ? ColorMode::kGray
                                                                      : ColorMode::kColor;
  return seq;
}

}  // namespace mkcf
