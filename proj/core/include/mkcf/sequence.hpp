#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "mkcf/features.hpp"
#include "mkcf/tracker.hpp"

namespace mkcf {

/// 1-based inclusive frame span, e.g. an occlusion interval.
struct FrameSpan {
  int start = 0;
  int end = 0;
};

/// Frames come either from files (OTB layout) or from memory (synthetic).
struct Sequence {
  std::string name;
  std::vector<std::filesystem::path> frame_paths;
  std::vector<ImageFrame> frames;
  std::vector<BoundingBox> groundtruth;  // 0-indexed pixel boxes
  ColorMode color_mode = ColorMode::kAuto;
  std::vector<FrameSpan> occlusions;
  std::vector<std::string> warnings;

  int size() const noexcept { return static_cast<int>(groundtruth.size()); }
  /// Frame i (0-based); gray-mode sequences are returned single-channel.
  ImageFrame frame(int i) const;
  FrameSource source() const;
};

/// Parses "x,y,w,h" lines (comma, tab or space separated, 1-indexed). Blank
/// lines are skipped; `origin` prefixes error messages.
std::vector<BoundingBox> parse_groundtruth(std::istream& in, const std::string& origin);

/// Parses "start,end" lines of 1-based frame spans.
std::vector<FrameSpan> parse_spans(std::istream& in, const std::string& origin);

/// Reads <dir>/img/<numbered frames> and <dir>/groundtruth_rect.txt, plus an
/// optional <dir>/occlusion.txt. Frame/box count mismatches truncate to the
/// shorter length and add a warning.
Sequence load_otb_sequence(const std::filesystem::path& dir);

}  // namespace mkcf
