#include "mkcf/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace mkcf {

namespace {

FeatureMap raw_feature(FeatureKind kind, const ImageFrame& patch, const ColorNameTable* table) {
  switch (kind) {
    case FeatureKind::kColorNames: return color_names(patch, *table);
    case FeatureKind::kRgbCells: return rgb_cells(patch);
    case FeatureKind::kGray: return gray_feature(to_gray(patch));
    case FeatureKind::kHog: return hog(patch);
  }
  raise(ErrorKind::kUnsupportedFeature, "unknown feature kind");
}

bool uses_pca(FeatureKind kind) {
  return kind == FeatureKind::kColorNames || kind == FeatureKind::kHog;
}

ImageFrame region_patch(const TrackerState& s, const ImageFrame& frame, double cx, double cy,
                        double scale) {
  const BoundingBox box =
      BoundingBox::from_center(cx, cy, s.base_box.w * scale, s.base_box.h * scale);
  return extract_patch(frame, box, s.config.search_factor, s.geometry.patch);
}

std::vector<KernelCorrelation> autocorrelations(const TrackerState& s) {
  std::vector<KernelCorrelation> ks;
  ks.reserve(s.templates.size());
  for (std::size_t m = 0; m < s.templates.size(); ++m) {
    ks.push_back(gaussian_correlation(s.templates[m], s.templates[m], s.config.sigma[m]));
  }
  return ks;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void blend(ComplexPlane& model, const ComplexPlane& fresh, double rate) {
  for (std::size_t i = 0; i < model.size(); ++i) model[i] = (1.0 - rate) * model[i] + rate * fresh[i];
}

void train(TrackerState& s, bool first) {
  const auto ks = autocorrelations(s);
  const EffectiveConfig& c = s.config;
  switch (c.solver) {
    case SolverKind::kKcf:
    case SolverKind::kKcfScale: {
      ComplexPlane fresh = kcf_train(ks.front(), s.labels, c.lambda_o);
      if (first) s.alpha_spectrum = std::move(fresh);
      else blend(s.alpha_spectrum, fresh, c.gamma.front());
      s.d = {1.0};
      break;
    }
    case SolverKind::kMkcf: {
      MkcfResult r = mkcf_alternate(ks, s.labels, c.lambda_o, c.iters_per_frame);
      if (first) s.alpha_spectrum = std::move(r.alpha_spectrum);
      else blend(s.alpha_spectrum, r.alpha_spectrum, mean(c.gamma));
      s.d = std::move(r.d);
      break;
    }
    case SolverKind::kMkcfup: {
      const SolverConfig sc = c.solver_config();
      s.mkcfup = first ? mkcfup_init(ks, s.labels, sc) : mkcfup_update(s.mkcfup, ks, s.labels, sc);
      s.alpha_spectrum = s.mkcfup.alpha_spectrum;
      s.d = s.mkcfup.d;
      break;
    }
  }
}

bool outside(const BoundingBox& b, const ImageFrame& f) {
  return b.x + b.w <= 0.0 || b.y + b.h <= 0.0 || b.x >= f.width() || b.y >= f.height();
}

}  // namespace

std::vector<FeatureMap> tracker_features(const TrackerState& state, const ImageFrame& frame,
                                         double center_x, double center_y, double scale) {
  const ImageFrame patch = region_patch(state, frame, center_x, center_y, scale);
  std::vector<FeatureMap> out;
  out.reserve(state.config.features.size());
  for (std::size_t m = 0; m < state.config.features.size(); ++m) {
    FeatureMap f = raw_feature(state.config.features[m], patch, state.color_table.get());
    if (state.pca[m]) f = pca_reduce(f, *state.pca[m]);
    out.push_back(hann_band(f));
  }
  return out;
}

TrackerState tracker_init(const ImageFrame& frame, const BoundingBox& box,
                          const TrackerConfig& config) {
  if (frame.empty()) raise(ErrorKind::kInvalidArgument, "tracker_init: empty frame");
  if (!box.valid() || !std::isfinite(box.x) || !std::isfinite(box.y)) {
    raise(ErrorKind::kInvalidArgument, "tracker_init: degenerate bounding box");
  }
  if (box.center_x() < 0.0 || box.center_y() < 0.0 || box.center_x() >= frame.width() ||
      box.center_y() >= frame.height()) {
    raise(ErrorKind::kOutOfFrame, "tracker_init: box center lies outside the frame");
  }

  TrackerState s;
  s.config = resolve(config, frame.channels());
  if (std::find(s.config.features.begin(), s.config.features.end(), FeatureKind::kColorNames) !=
      s.config.features.end()) {
    s.color_table = std::make_shared<const ColorNameTable>(
        ColorNameTable::load(s.config.color_names_path));
  }
  s.geometry = plan_geometry(box, s.config.search_factor, s.config.template_area_cap);
  s.base_box = box;
  s.box = box;
  s.scale = 1.0;

  const ImageFrame patch = region_patch(s, frame, box.center_x(), box.center_y(), 1.0);
  s.pca.resize(s.config.features.size());
  for (std::size_t m = 0; m < s.config.features.size(); ++m) {
    FeatureMap f = raw_feature(s.config.features[m], patch, s.color_table.get());
    if (uses_pca(s.config.features[m])) {
      s.pca[m] = fit_pca(std::span<const FeatureMap>(&f, 1), kPcaDimensions);
      f = pca_reduce(f, *s.pca[m]);
    }
    s.templates.push_back(hann_band(f));
  }
  // Label std is relative to the target, not the padded search region.
  s.labels = gaussian_labels(s.geometry.cells_w, s.geometry.cells_h,
                             s.config.bandwidth_factor / s.config.search_factor,
                             s.config.kernel_count());
  train(s, true);
  s.frame_index = 1;
  return s;
}

ResponseMap tracker_detect(const TrackerState& state, const ImageFrame& frame,
                           double scale_factor) {
  if (state.frame_index < 1) raise(ErrorKind::kPrecondition, "tracker not initialized");
  const double scale = state.scale * scale_factor;
  const auto test = tracker_features(state, frame, state.box.center_x(), state.box.center_y(), scale);
  std::vector<KernelCorrelation> ks;
  ks.reserve(test.size());
  for (std::size_t m = 0; m < test.size(); ++m) {
    ks.push_back(gaussian_correlation(state.templates[m], test[m], state.config.sigma[m]));
  }
  return detect(ks, state.alpha_spectrum, state.d);
}

StepResult tracker_step(TrackerState& state, const ImageFrame& frame) {
  if (state.frame_index < 1) raise(ErrorKind::kPrecondition, "tracker not initialized");
  if (state.config.mode == ColorMode::kColor && frame.channels() != 3) {
    raise(ErrorKind::kDimensionMismatch, "color tracker received a single-channel frame");
  }
  const int n = state.config.scale_count;
  const int half = n / 2;
  double best_factor = 1.0;
  ResponseMap best = tracker_detect(state, frame, 1.0);
  for (int i = -half; i <= half; ++i) {
    if (i == 0) continue;
    const double factor = std::pow(state.config.scale_step, i);
    ResponseMap r = tracker_detect(state, frame, factor);
    if (r.peak_value > best.peak_value) {
      best = std::move(r);
      best_factor = factor;
    }
  }

  const double scale = state.scale * best_factor;
  double cx = state.box.center_x() + best.dx * state.geometry.pixels_per_cell_x() * scale;
  double cy = state.box.center_y() + best.dy * state.geometry.pixels_per_cell_y() * scale;
  const double w = state.base_box.w * scale;
  const double h = state.base_box.h * scale;
  BoundingBox box = BoundingBox::from_center(cx, cy, w, h);
  const bool drift = outside(box, frame);
  if (drift) {
    cx = std::clamp(cx, 0.0, frame.width() - 1.0);
    cy = std::clamp(cy, 0.0, frame.height() - 1.0);
    box = BoundingBox::from_center(cx, cy, w, h);
  }
  state.scale = scale;
  state.box = box;
  state.drift = state.drift || drift;

  const auto fresh = tracker_features(state, frame, cx, cy, scale);
  for (std::size_t m = 0; m < fresh.size(); ++m) {
    const double eta = state.config.eta[m];
    auto dst = state.templates[m].values();
    const auto src = fresh[m].values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = (1.0 - eta) * dst[i] + eta * src[i];
  }
  train(state, false);
  ++state.frame_index;

  return {box, scale, best.peak_value, best.dx, best.dy, drift};
}

SequenceRun run_sequence(const FrameSource& frames, const BoundingBox& init_box,
                         const TrackerConfig& config) {
  if (frames.count < 1 || !frames.load) raise(ErrorKind::kSequence, "sequence has no frames");
  using Clock = std::chrono::steady_clock;
  auto load = [&](int i) {
    try {
      return frames.load(i);
    } catch (const Error& e) {
      raise(ErrorKind::kSequence, "frame " + std::to_string(i + 1) + ": " + e.what());
    }
  };

  SequenceRun run;
  const ImageFrame first = load(0);
  auto t0 = Clock::now();
  TrackerState state = tracker_init(first, init_box, config);
  run.seconds.push_back(std::chrono::duration<double>(Clock::now() - t0).count());
  run.config = state.config;
  run.boxes.push_back(init_box);
  run.peaks.push_back(1.0);
  run.scales.push_back(1.0);
  run.drift.push_back(false);

  double tracking_seconds = 0.0;
  for (int i = 1; i < frames.count; ++i) {
    const ImageFrame frame = load(i);
    t0 = Clock::now();
    const StepResult r = tracker_step(state, frame);
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    tracking_seconds += dt;
    run.seconds.push_back(dt);
    run.boxes.push_back(r.box);
    run.peaks.push_back(r.peak);
    run.scales.push_back(r.scale);
    run.drift.push_back(r.drift);
  }
  if (frames.count > 1 && tracking_seconds > 0.0) {
    run.mean_fps = (frames.count - 1) / tracking_seconds;
  }
  return run;
}

}  // namespace mkcf
