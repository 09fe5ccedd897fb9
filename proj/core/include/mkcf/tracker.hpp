#pragma once

// Per-frame tracking loop shared by the KCF, KCFscale, MKCF and MKCFup
// variants.
//
// Kernel 0 is the color kernel (color names, cell-averaged RGB fallback, or
// the gray intensity feature for single-channel sequences); kernel 1 is HOG.
// Single-kernel KCF uses whichever of the two `kcf_feature` selects.

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mkcf/features.hpp"
#include "mkcf/kernels.hpp"
#include "mkcf/solvers.hpp"

namespace mkcf {

enum class SolverKind { kKcf, kKcfScale, kMkcf, kMkcfup };
enum class ColorMode { kAuto, kColor, kGray };
enum class FeatureKind { kColorNames, kRgbCells, kGray, kHog };

std::string to_string(SolverKind kind);
std::string to_string(ColorMode mode);
std::string to_string(FeatureKind kind);
SolverKind parse_solver_kind(const std::string& name);
ColorMode parse_color_mode(const std::string& name);

inline constexpr int kColorKernel = 0;
inline constexpr int kHogKernel = 1;

/// User-facing configuration. Unset optionals take the per-mode defaults.
struct TrackerConfig {
  SolverKind solver = SolverKind::kMkcfup;
  ColorMode mode = ColorMode::kAuto;
  std::string kcf_feature = "hog";  // "hog" or "color"
  double search_factor = 2.5;
  std::optional<double> sigma_color, sigma_hog;
  std::optional<double> gamma_color, gamma_hog;
  std::optional<double> eta_color, eta_hog;
  double lambda_o = 1e-3;
  int iters_per_frame = 3;
  double d_floor = 1e-12;
  int scale_count = 5;
  double scale_step = 1.02;
  double bandwidth_factor = 0.1;
  int template_area_cap = 2304;  // cells
  std::string color_names_path;  // empty: RGB cell fallback

  /// Applies a `key=value` override; keys mirror the field names.
  void set(const std::string& key, const std::string& value);
};

/// Fully resolved configuration for one sequence.
struct EffectiveConfig {
  SolverKind solver = SolverKind::kMkcfup;
  ColorMode mode = ColorMode::kColor;  // never kAuto
  double search_factor = 2.5;
  std::vector<FeatureKind> features;   // one per kernel
  std::vector<double> sigma;
  std::vector<double> gamma;
  std::vector<double> eta;
  double lambda_o = 1e-3;
  int iters_per_frame = 3;
  double d_floor = 1e-12;
  int scale_count = 5;
  double scale_step = 1.02;
  double bandwidth_factor = 0.1;
  int template_area_cap = 2304;
  std::string color_names_path;
  std::vector<std::string> notes;  // fallbacks and forced settings

  int kernel_count() const noexcept { return static_cast<int>(features.size()); }
  SolverConfig solver_config() const;
};

/// Resolves defaults for an image with `channels` channels and validates.
EffectiveConfig resolve(const TrackerConfig& config, int channels);

nlohmann::json to_json(const EffectiveConfig& config);

/// Search-region geometry fixed at initialization.
struct PatchGeometry {
  double region_w = 0.0;  // pixels at scale 1
  double region_h = 0.0;
  PixelSize patch;        // resampled patch, multiples of kCellSize
  int cells_w = 0;
  int cells_h = 0;

  /// Pixels per cell along each axis at scale 1.
  double pixels_per_cell_x() const noexcept { return region_w / cells_w; }
  double pixels_per_cell_y() const noexcept { return region_h / cells_h; }
};

PatchGeometry plan_geometry(const BoundingBox& box, double search_factor, int area_cap_cells);

struct TrackerState {
  EffectiveConfig config;
  std::shared_ptr<const ColorNameTable> color_table;
  PatchGeometry geometry;
  BoundingBox base_box;                       // init box; size at scale 1
  BoundingBox box;
  double scale = 1.0;
  std::vector<std::optional<PcaBasis>> pca;   // per kernel, frozen
  std::vector<FeatureMap> templates;          // x_m^p
  Labels labels;
  ComplexPlane alpha_spectrum;                // KCF / MKCF model
  std::vector<double> d;                      // current kernel weights
  SolverState mkcfup;
  int frame_index = 0;                        // frames consumed, 1 after init
  bool drift = false;
};

struct StepResult {
  BoundingBox box;
  double scale = 1.0;
  double peak = 0.0;
  int dx_cells = 0;
  int dy_cells = 0;
  bool drift = false;
};

TrackerState tracker_init(const ImageFrame& frame, const BoundingBox& box,
                          const TrackerConfig& config);

/// Detects over the scale pyramid, moves the box, then updates templates and
/// the solver from the patch at the new location.
StepResult tracker_step(TrackerState& state, const ImageFrame& frame);

/// Responses at one scale multiplier relative to the current scale. Does not
/// modify the state.
ResponseMap tracker_detect(const TrackerState& state, const ImageFrame& frame,
                           double scale_factor);

/// Hann-banded per-kernel features of the region around `center` at `scale`.
std::vector<FeatureMap> tracker_features(const TrackerState& state, const ImageFrame& frame,
                                         double center_x, double center_y, double scale);

struct FrameSource {
  int count = 0;
  std::function<ImageFrame(int)> load;  // 0-based frame index
};

struct SequenceRun {
  EffectiveConfig config;
  std::vector<BoundingBox> boxes;
  std::vector<double> peaks;
  std::vector<double> scales;
  std::vector<double> seconds;  // wall time per frame
  std::vector<bool> drift;
  double mean_fps = 0.0;        // over frames 2..N; 0 for one-frame runs
};

SequenceRun run_sequence(const FrameSource& frames, const BoundingBox& init_box,
                         const TrackerConfig& config);

}  // namespace mkcf
