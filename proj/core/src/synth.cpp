#include "mkcf/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "mkcf/metrics.hpp"

namespace mkcf {

namespace {

using Rgb = std::array<double, 3>;
constexpr Rgb kLuma = {0.299, 0.587, 0.114};
constexpr int kSupersample = 4;

/// Random control grid sampled bilinearly over [0, 1]^2.
class ColorGrid {
 public:
  ColorGrid(int gw, int gh, std::mt19937_64& rng, double lo, double hi, bool gray)
      : gw_(gw), gh_(gh), cells_(static_cast<std::size_t>(gw * gh)) {
    std::uniform_real_distribution<double> u(lo, hi);
    for (auto& c : cells_) {
      const double g = u(rng);
      c = gray ? Rgb{g, g, g} : Rgb{g, u(rng), u(rng)};
    }
  }

  Rgb sample(double u, double v) const {
    const double fx = std::clamp(u, 0.0, 1.0) * (gw_ - 1);
    const double fy = std::clamp(v, 0.0, 1.0) * (gh_ - 1);
    const int x0 = std::min(static_cast<int>(fx), gw_ - 2);
    const int y0 = std::min(static_cast<int>(fy), gh_ - 2);
    const double ax = fx - x0;
    const double ay = fy - y0;
    Rgb out{};
    for (int c = 0; c < 3; ++c) {
      const double top = (1 - ax) * at(x0, y0)[c] + ax * at(x0 + 1, y0)[c];
      const double bot = (1 - ax) * at(x0, y0 + 1)[c] + ax * at(x0 + 1, y0 + 1)[c];
      out[c] = (1 - ay) * top + ay * bot;
    }
    return out;
  }

  /// Piecewise-constant lookup; gives sharp block edges.
  Rgb block(double u, double v) const {
    const int x = std::clamp(static_cast<int>(u * gw_), 0, gw_ - 1);
    const int y = std::clamp(static_cast<int>(v * gh_), 0, gh_ - 1);
    return at(x, y);
  }

 private:
  const Rgb& at(int x, int y) const { return cells_[static_cast<std::size_t>(y * gw_ + x)]; }

  int gw_;
  int gh_;
  std::vector<Rgb> cells_;
};

/// Smooth field of luminance-neutral chroma offsets.
class ChromaField {
 public:
  ChromaField(int gw, int gh, std::mt19937_64& rng, double amplitude)
      : gw_(gw), gh_(gh), coeffs_(static_cast<std::size_t>(gw * gh)) {
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    for (auto& c : coeffs_) c = {u(rng), u(rng)};
  }

  Rgb sample(double u, double v) const {
    const double fx = std::clamp(u, 0.0, 1.0) * (gw_ - 1);
    const double fy = std::clamp(v, 0.0, 1.0) * (gh_ - 1);
    const int x0 = std::min(static_cast<int>(fx), gw_ - 2);
    const int y0 = std::min(static_cast<int>(fy), gh_ - 2);
    const double ax = fx - x0;
    const double ay = fy - y0;
    std::array<double, 2> k{};
    for (int i = 0; i < 2; ++i) {
      const double top = (1 - ax) * at(x0, y0)[i] + ax * at(x0 + 1, y0)[i];
      const double bot = (1 - ax) * at(x0, y0 + 1)[i] + ax * at(x0 + 1, y0 + 1)[i];
      k[i] = (1 - ay) * top + ay * bot;
    }
    // Both basis vectors are orthogonal to the luminance weights.
    return {k[0] * kLuma[1] + k[1] * kLuma[2], -k[0] * kLuma[0], -k[1] * kLuma[0]};
  }

 private:
  const std::array<double, 2>& at(int x, int y) const {
    return coeffs_[static_cast<std::size_t>(y * gw_ + x)];
  }

  int gw_;
  int gh_;
  std::vector<std::array<double, 2>> coeffs_;
};

/// Diagonal stripes; red-tinted with faint stripes, or gray with strong
/// stripes once the appearance switches.
Rgb phase_target(double u, double v, bool switched) {
  constexpr double kStripes = 5.0;
  const double wave = std::sin(2.0 * std::numbers::pi * kStripes * (u + v));
  if (switched) return {0.5 + 0.25 * wave, 0.5 + 0.25 * wave, 0.5 + 0.25 * wave};
  const double stripe = 0.14 * wave;
  return {0.70 + stripe, 0.36 + stripe, 0.36 + stripe};
}

/// Separable Gaussian blur with edge clamping, applied in place.
void blur(ImageFrame& f, double sigma) {
  if (!(sigma > 0.0)) return;
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double total = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));
    total += k[static_cast<std::size_t>(i + r)];
  }
  for (double& w : k) w /= total;
  ImageFrame tmp(f.width(), f.height(), f.channels());
  for (int c = 0; c < f.channels(); ++c) {
    for (int y = 0; y < f.height(); ++y) {
      for (int x = 0; x < f.width(); ++x) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) {
          acc += k[static_cast<std::size_t>(i + r)] * f.at(std::clamp(x + i, 0, f.width() - 1), y, c);
        }
        tmp.at(x, y, c) = acc;
      }
    }
    for (int y = 0; y < f.height(); ++y) {
      for (int x = 0; x < f.width(); ++x) {
        double acc = 0.0;
        for (int i = -r; i <= r; ++i) {
          acc += k[static_cast<std::size_t>(i + r)] * tmp.at(x, std::clamp(y + i, 0, f.height() - 1), c);
        }
        f.at(x, y, c) = acc;
      }
    }
  }
}

void put(ImageFrame& f, int x, int y, const Rgb& c) {
  if (f.channels() == 1) {
    f.at(x, y) = std::clamp(kLuma[0] * c[0] + kLuma[1] * c[1] + kLuma[2] * c[2], 0.0, 1.0);
    return;
  }
  for (int i = 0; i < 3; ++i) f.at(x, y, i) = std::clamp(c[i], 0.0, 1.0);
}

}  // namespace

std::vector<std::string> synth_preset_names() { return {"translate", "zoom", "phase", "static"}; }

SynthSpec synth_preset(const std::string& name) {
  SynthSpec s;
  s.name = name;
  if (name == "translate") {
    s.frames = 50;
    s.start_cx = 80.0;
    s.vx = 3.0;
  } else if (name == "zoom") {
    s.frames = 30;
    s.zoom = 1.01;
  } else if (name == "phase") {
    s.frames = 60;
    s.target_w = 48.0;
    s.target_h = 48.0;
    s.start_cy = 95.0;
    s.orbit_radius = 50.0;
    s.orbit_period = 60.0;
    s.phase_switch = true;
    s.background_contrast = 0.0;
  } else if (name == "static") {
    s.frames = 10;
  } else {
    raise(ErrorKind::kInvalidArgument,
          "unknown synthetic sequence '" + name + "' (expected translate, zoom, phase or static)");
  }
  return s;
}

std::vector<BoundingBox> synth_groundtruth(const SynthSpec& s) {
  if (s.frames < 1 || s.width < 8 || s.height < 8 || !(s.target_w > 0) || !(s.target_h > 0) ||
      !(s.zoom > 0)) {
    raise(ErrorKind::kInvalidArgument, "synthetic spec: invalid sizes");
  }
  std::vector<BoundingBox> boxes;
  boxes.reserve(static_cast<std::size_t>(s.frames));
  for (int p = 0; p < s.frames; ++p) {
    double cx = s.start_cx + p * s.vx;
    double cy = s.start_cy + p * s.vy;
    if (s.orbit_radius > 0.0) {
      const double phase = 2.0 * std::numbers::pi * p / s.orbit_period;
      cx += s.orbit_radius * std::sin(phase);
      cy += s.orbit_radius * (1.0 - std::cos(phase));
    }
    const double growth = std::pow(s.zoom, p);
    const double w = s.zoom == 1.0 ? s.target_w : static_cast<double>(std::lround(s.target_w * growth));
    const double h = s.zoom == 1.0 ? s.target_h : static_cast<double>(std::lround(s.target_h * growth));
    const BoundingBox b = BoundingBox::from_center(cx, cy, w, h);
    if (b.x < 0.0 || b.y < 0.0 || b.x + b.w > s.width || b.y + b.h > s.height) {
      raise(ErrorKind::kInvalidArgument,
            "synthetic spec: target leaves the frame at frame " + std::to_string(p + 1));
    }
    if (!boxes.empty() && offset_ratio(boxes.back(), b) > s.max_offset_ratio) {
      raise(ErrorKind::kInvalidArgument,
            "synthetic spec: offset ratio exceeds the declared maximum at frame " +
                std::to_string(p + 1));
    }
    boxes.push_back(b);
  }
  return boxes;
}

Sequence synth_sequence(const SynthSpec& s, std::uint64_t seed) {
  Sequence seq;
  seq.name = s.name;
  seq.groundtruth = synth_groundtruth(s);
  seq.color_mode = s.gray ? ColorMode::kGray : ColorMode::kColor;

  std::mt19937_64 rng(seed);
  const ColorGrid background(s.width / 8 + 1, s.height / 8 + 1, rng,
                             0.5 - s.background_contrast, 0.5 + s.background_contrast,
                             s.gray || s.phase_switch);
  const ColorGrid target(s.texture_cells, s.texture_cells, rng, 0.05, 0.95, s.gray);
  std::normal_distribution<double> noise(0.0, s.luminance_noise);

  const int channels = s.gray ? 1 : 3;
  const int half = s.frames / 2;
  seq.frames.reserve(static_cast<std::size_t>(s.frames));
  for (int p = 0; p < s.frames; ++p) {
    const BoundingBox& b = seq.groundtruth[static_cast<std::size_t>(p)];
    const bool noisy = s.phase_switch && p < half;
    const bool blobs = s.phase_switch && p >= half;
    std::optional<ChromaField> chroma;
    if (blobs) chroma.emplace(s.width / 24 + 2, s.height / 24 + 2, rng, s.chroma_amplitude);

    ImageFrame scene(s.width, s.height, 3);
    for (int y = 0; y < s.height; ++y) {
      for (int x = 0; x < s.width; ++x) {
        Rgb c{};
        for (int sy = 0; sy < kSupersample; ++sy) {
          for (int sx = 0; sx < kSupersample; ++sx) {
            const double qx = x + (sx + 0.5) / kSupersample;
            const double qy = y + (sy + 0.5) / kSupersample;
            Rgb q;
            if (qx >= b.x && qx < b.x + b.w && qy >= b.y && qy < b.y + b.h) {
              const double u = (qx - b.x) / b.w;
              const double v = (qy - b.y) / b.h;
              q = s.phase_switch ? phase_target(u, v, blobs) : target.sample(u, v);
            } else {
              // Zoom magnifies the whole scene about the target center.
              const double bx = b.center_x() + (qx - b.center_x()) * s.target_w / b.w;
              const double by = b.center_y() + (qy - b.center_y()) * s.target_h / b.h;
              q = background.sample(bx / s.width, by / s.height);
            }
            for (int i = 0; i < 3; ++i) c[i] += q[i] / (kSupersample * kSupersample);
          }
        }
        if (chroma) {
          const Rgb d = chroma->sample((x + 0.5) / s.width, (y + 0.5) / s.height);
          for (int i = 0; i < 3; ++i) c[i] += d[i];
        }
        for (int i = 0; i < 3; ++i) scene.at(x, y, i) = c[i];
      }
    }
    blur(scene, s.blur_sigma);

    ImageFrame f(s.width, s.height, channels);
    for (int y = 0; y < s.height; ++y) {
      for (int x = 0; x < s.width; ++x) {
        Rgb c = {scene.at(x, y, 0), scene.at(x, y, 1), scene.at(x, y, 2)};
        if (noisy) {
          const double n = noise(rng);
          for (double& ch : c) ch += n;
        }
        put(f, x, y, c);
      }
    }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

}  // namespace mkcf
