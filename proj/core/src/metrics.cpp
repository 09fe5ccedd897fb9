#include "mkcf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mkcf {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double center_error(const BoundingBox& a, const BoundingBox& b) {
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

double offset_ratio(const BoundingBox& prev, const BoundingBox& next) {
  if (!prev.valid()) raise(ErrorKind::kInvalidArgument, "offset_ratio: previous box has no area");
  return center_error(prev, next) / std::sqrt(prev.w * prev.h);
}

SmallMoveReport is_small_move(std::span<const BoundingBox> gt, std::span<const FrameSpan> spans) {
  SmallMoveReport r;
  for (std::size_t i = 1; i < gt.size(); ++i) {
    const double tau = offset_ratio(gt[i - 1], gt[i]);
    r.adjacent_tau.push_back(tau);
    if (tau > kSmallMoveThreshold) r.small_move = false;
  }
  for (const FrameSpan& s : spans) {
    if (s.start < 1 || s.end < s.start || static_cast<std::size_t>(s.end) > gt.size()) {
      raise(ErrorKind::kInvalidArgument, "occlusion span " + std::to_string(s.start) + "-" +
                                             std::to_string(s.end) + " outside the sequence");
    }
    const double tau = offset_ratio(gt[static_cast<std::size_t>(s.start - 1)],
                                    gt[static_cast<std::size_t>(s.end - 1)]);
    r.span_tau.push_back(tau);
    if (tau > kSmallMoveThreshold) r.small_move = false;
  }
  return r;
}

EvaluationResult evaluate_ope(std::span<const BoundingBox> pred, std::span<const BoundingBox> gt) {
  if (pred.size() != gt.size()) {
    raise(ErrorKind::kDimensionMismatch, "evaluate_ope: " + std::to_string(pred.size()) +
                                             " predictions for " + std::to_string(gt.size()) +
                                             " ground-truth boxes");
  }
  if (gt.empty()) raise(ErrorKind::kInvalidArgument, "evaluate_ope: empty sequence");

  EvaluationResult r;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    r.center_errors.push_back(center_error(pred[i], gt[i]));
    r.ious.push_back(iou(pred[i], gt[i]));
  }
  const double n = static_cast<double>(gt.size());
  for (int t = 0; t <= kPrecisionMaxThreshold; ++t) {
    const auto hits = std::count_if(r.center_errors.begin(), r.center_errors.end(),
                                    [t](double e) { return e <= t; });
    r.precision_thresholds.push_back(t);
    r.precision_curve.push_back(static_cast<double>(hits) / n);
  }
  r.precision_at_20 = r.precision_curve[static_cast<std::size_t>(kPrecisionAt)];

  double sum = 0.0;
  for (int i = 0; i <= kSuccessSteps; ++i) {
    const double t = static_cast<double>(i) / kSuccessSteps;
    const auto hits = std::count_if(r.ious.begin(), r.ious.end(), [t](double v) { return v >= t; });
    r.success_thresholds.push_back(t);
    r.success_curve.push_back(static_cast<double>(hits) / n);
    sum += r.success_curve.back();
  }
  r.auc = sum / (kSuccessSteps + 1);
  return r;
}

}  // namespace mkcf
