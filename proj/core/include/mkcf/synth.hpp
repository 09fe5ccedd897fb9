#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mkcf/sequence.hpp"

namespace mkcf {

/// Deterministic test sequence: a textured target over a static textured
/// background.
///
/// The target center follows start + frame * (vx, vy), plus a circular orbit
/// of `orbit_radius` with period `orbit_period` frames when the radius is
/// positive. Target size at 0-based frame p is lround(target * zoom^p).
///
/// With `phase_switch`, the target is red-tinted with diagonal luminance
/// stripes. In the first half every frame gets fresh per-pixel luminance
/// noise (gradients unreliable, color reliable); in the second half every
/// frame gets fresh smooth luminance-neutral chroma blobs (color unreliable,
/// gradients reliable).
struct SynthSpec {
  std::string name = "custom";
  int width = 320;
  int height = 240;
  int frames = 50;
  double target_w = 64.0;
  double target_h = 64.0;
  double start_cx = 160.0;
  double start_cy = 120.0;
  double vx = 0.0;
  double vy = 0.0;
  double zoom = 1.0;
  int texture_cells = 16;  // target texture blocks per side
  double blur_sigma = 1.0;  // optical blur in pixels
  double background_contrast = 0.3;  // half-range of background gray levels
  double orbit_radius = 0.0;
  double orbit_period = 60.0;
  bool phase_switch = false;
  double luminance_noise = 0.25;  // std of the first-half noise
  double chroma_amplitude = 0.3;  // peak of the second-half blobs
  bool gray = false;
  double max_offset_ratio = 0.6;
};

/// Named presets: translate, zoom, phase, static.
SynthSpec synth_preset(const std::string& name);
std::vector<std::string> synth_preset_names();

/// Ground-truth boxes of a spec without rendering.
std::vector<BoundingBox> synth_groundtruth(const SynthSpec& spec);

/// Raises kInvalidArgument when the target leaves the frame or a step
/// exceeds max_offset_ratio.
Sequence synth_sequence(const SynthSpec& spec, std::uint64_t seed);

}  // namespace mkcf
