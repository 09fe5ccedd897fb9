#pragma once

#include <span>
#include <vector>

#include "mkcf/features.hpp"
#include "mkcf/sequence.hpp"

namespace mkcf {

inline constexpr double kSmallMoveThreshold = 0.6;
inline constexpr int kPrecisionMaxThreshold = 50;  // pixels, step 1
inline constexpr int kSuccessSteps = 20;           // IoU thresholds i / 20
inline constexpr double kPrecisionAt = 20.0;

double iou(const BoundingBox& a, const BoundingBox& b);
double center_error(const BoundingBox& a, const BoundingBox& b);

/// Center displacement over sqrt(prev.w * prev.h).
double offset_ratio(const BoundingBox& prev, const BoundingBox& next);

struct SmallMoveReport {
  bool small_move = true;
  std::vector<double> adjacent_tau;  // tau between frames i and i + 1
  std::vector<double> span_tau;      // tau across each occlusion span
};

/// Small move iff every adjacent tau and every span-endpoint tau is <= 0.6.
SmallMoveReport is_small_move(std::span<const BoundingBox> gt, std::span<const FrameSpan> spans = {});

struct EvaluationResult {
  std::vector<double> precision_thresholds;  // 0, 1, ..., 50 px
  std::vector<double> precision_curve;       // fraction with error <= threshold
  std::vector<double> success_thresholds;    // 0, 0.05, ..., 1
  std::vector<double> success_curve;         // fraction with IoU >= threshold
  double precision_at_20 = 0.0;
  double auc = 0.0;                          // mean of success_curve
  std::vector<double> center_errors;
  std::vector<double> ious;
};

/// One-pass evaluation over all frames, the first included.
EvaluationResult evaluate_ope(std::span<const BoundingBox> pred, std::span<const BoundingBox> gt);

}  // namespace mkcf
