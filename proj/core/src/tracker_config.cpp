#include <algorithm>
#include <cmath>
#include <charconv>
#include <string>

#include "mkcf/tracker.hpp"

namespace mkcf {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kKcf: return "kcf";
    case SolverKind::kKcfScale: return "kcfscale";
    case SolverKind::kMkcf: return "mkcf";
    case SolverKind::kMkcfup: return "mkcfup";
  }
  return "unknown";
}

std::string to_string(ColorMode mode) {
  switch (mode) {
    case ColorMode::kAuto: return "auto";
    case ColorMode::kColor: return "color";
    case ColorMode::kGray: return "gray";
  }
  return "unknown";
}

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kColorNames: return "color_names";
    case FeatureKind::kRgbCells: return "rgb_cells";
    case FeatureKind::kGray: return "gray";
    case FeatureKind::kHog: return "hog";
  }
  return "unknown";
}

SolverKind parse_solver_kind(const std::string& name) {
  for (auto k : {SolverKind::kKcf, SolverKind::kKcfScale, SolverKind::kMkcf, SolverKind::kMkcfup}) {
    if (to_string(k) == name) return k;
  }
  raise(ErrorKind::kInvalidArgument,
        "unknown solver '" + name + "' (expected kcf, kcfscale, mkcf or mkcfup)");
}

ColorMode parse_color_mode(const std::string& name) {
  for (auto m : {ColorMode::kAuto, ColorMode::kColor, ColorMode::kGray}) {
    if (to_string(m) == name) return m;
  }
  raise(ErrorKind::kInvalidArgument, "unknown mode '" + name + "' (expected auto, color or gray)");
}

namespace {

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    raise(ErrorKind::kInvalidArgument, "config " + key + ": not a number: '" + value + "'");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& value) {
  int out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    raise(ErrorKind::kInvalidArgument, "config " + key + ": not an integer: '" + value + "'");
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) raise(ErrorKind::kInvalidArgument, message);
}

}  // namespace

void TrackerConfig::set(const std::string& key, const std::string& value) {
  if (key == "solver") solver = parse_solver_kind(value);
  else if (key == "mode") mode = parse_color_mode(value);
  else if (key == "kcf_feature") kcf_feature = value;
  else if (key == "search_factor") search_factor = parse_real(key, value);
  else if (key == "sigma_color") sigma_color = parse_real(key, value);
  else if (key == "sigma_hog") sigma_hog = parse_real(key, value);
  else if (key == "gamma_color") gamma_color = parse_real(key, value);
  else if (key == "gamma_hog") gamma_hog = parse_real(key, value);
  else if (key == "eta_color") eta_color = parse_real(key, value);
  else if (key == "eta_hog") eta_hog = parse_real(key, value);
  else if (key == "lambda_o") lambda_o = parse_real(key, value);
  else if (key == "iters_per_frame") iters_per_frame = parse_int(key, value);
  else if (key == "d_floor") d_floor = parse_real(key, value);
  else if (key == "scale_count") scale_count = parse_int(key, value);
  else if (key == "scale_step") scale_step = parse_real(key, value);
  else if (key == "bandwidth_factor") bandwidth_factor = parse_real(key, value);
  else if (key == "template_area_cap") template_area_cap = parse_int(key, value);
  else if (key == "color_names_path") color_names_path = value;
  else raise(ErrorKind::kInvalidArgument, "unknown config key '" + key + "'");
}

SolverConfig EffectiveConfig::solver_config() const {
  SolverConfig s;
  s.kernel_count = kernel_count();
  s.lambda_o = lambda_o;
  s.gamma = gamma;
  s.iters_per_frame = iters_per_frame;
  s.d_floor = d_floor;
  return s;
}

EffectiveConfig resolve(const TrackerConfig& config, int channels) {
  if (channels != 1 && channels != 3) {
    raise(ErrorKind::kInvalidArgument, "frames must have 1 or 3 channels");
  }
  EffectiveConfig out;
  out.solver = config.solver;
  out.mode = config.mode;
  if (out.mode == ColorMode::kAuto) out.mode = channels == 3 ? ColorMode::kColor : ColorMode::kGray;
  if (out.mode == ColorMode::kColor && channels != 3) {
    raise(ErrorKind::kUnsupportedFeature, "color mode requested for a single-channel sequence");
  }
  const bool color = out.mode == ColorMode::kColor;

  const double sigma_c = config.sigma_color.value_or(color ? 0.515 : 0.3);
  const double sigma_h = config.sigma_hog.value_or(color ? 0.6 : 0.4);
  const double gamma_c = config.gamma_color.value_or(color ? 0.0174 : 0.0175);
  const double gamma_h = config.gamma_hog.value_or(color ? 0.0173 : 0.018);
  const double eta_c = config.eta_color.value_or(gamma_c);
  const double eta_h = config.eta_hog.value_or(gamma_h);

  FeatureKind color_kind = FeatureKind::kGray;
  if (color) {
    if (config.color_names_path.empty()) {
      color_kind = FeatureKind::kRgbCells;
      out.notes.push_back("no color-name table configured; color kernel uses cell-averaged RGB");
    } else {
      color_kind = FeatureKind::kColorNames;
    }
  }
  out.color_names_path = config.color_names_path;

  const bool single = out.solver == SolverKind::kKcf || out.solver == SolverKind::kKcfScale;
  if (single) {
    require(config.kcf_feature == "hog" || config.kcf_feature == "color",
            "kcf_feature must be 'hog' or 'color'");
    if (config.kcf_feature == "hog") {
      out.features = {FeatureKind::kHog};
      out.sigma = {sigma_h};
      out.gamma = {gamma_h};
      out.eta = {eta_h};
    } else {
      out.features = {color_kind};
      out.sigma = {sigma_c};
      out.gamma = {gamma_c};
      out.eta = {eta_c};
    }
  } else {
    out.features = {color_kind, FeatureKind::kHog};
    out.sigma = {sigma_c, sigma_h};
    out.gamma = {gamma_c, gamma_h};
    out.eta = {eta_c, eta_h};
  }

  out.search_factor = config.search_factor;
  out.lambda_o = config.lambda_o;
  out.iters_per_frame = config.iters_per_frame;
  out.d_floor = config.d_floor;
  out.scale_count = config.scale_count;
  out.scale_step = config.scale_step;
  out.bandwidth_factor = config.bandwidth_factor;
  out.template_area_cap = config.template_area_cap;
  if (out.solver == SolverKind::kKcf && out.scale_count != 1) {
    out.scale_count = 1;
    out.notes.push_back("kcf runs without scale search; scale_count forced to 1");
  }

  require(out.search_factor >= 1.0, "search_factor must be >= 1");
  for (double s : out.sigma) require(s > 0.0, "sigma must be > 0");
  for (double g : out.gamma) require(g > 0.0 && g < 1.0, "gamma must lie in (0, 1)");
  for (double e : out.eta) require(e >= 0.0 && e <= 1.0, "eta must lie in [0, 1]");
  require(out.lambda_o > 0.0, "lambda_o must be > 0");
  require(out.iters_per_frame >= 1, "iters_per_frame must be >= 1");
  require(out.d_floor >= 0.0, "d_floor must be >= 0");
  require(out.scale_count >= 1 && out.scale_count % 2 == 1, "scale_count must be odd and positive");
  require(out.scale_step > 1.0, "scale_step must be > 1");
  require(out.bandwidth_factor > 0.0, "bandwidth_factor must be > 0");
  require(out.template_area_cap >= 9, "template_area_cap must be >= 9 cells");
  return out;
}

nlohmann::json to_json(const EffectiveConfig& c) {
  nlohmann::json features = nlohmann::json::array();
  for (auto f : c.features) features.push_back(to_string(f));
  return {
      {"solver", to_string(c.solver)},
      {"mode", to_string(c.mode)},
      {"features", features},
      {"sigma", c.sigma},
      {"gamma", c.gamma},
      {"eta", c.eta},
      {"search_factor", c.search_factor},
      {"lambda_o", c.lambda_o},
      {"lambda", c.solver_config().lambda()},
      {"iters_per_frame", c.iters_per_frame},
      {"d_floor", c.d_floor},
      {"scale_count", c.scale_count},
      {"scale_step", c.scale_step},
      {"bandwidth_factor", c.bandwidth_factor},
      {"template_area_cap", c.template_area_cap},
      {"color_names_path", c.color_names_path},
      {"notes", c.notes},
  };
}

PatchGeometry plan_geometry(const BoundingBox& box, double search_factor, int area_cap_cells) {
  if (!box.valid()) raise(ErrorKind::kInvalidArgument, "bounding box must have positive area");
  PatchGeometry g;
  g.region_w = box.w * search_factor;
  g.region_h = box.h * search_factor;
  const double cells_area = g.region_w * g.region_h / (kCellSize * kCellSize);
  const double shrink = std::min(1.0, std::sqrt(area_cap_cells / cells_area));
  g.cells_w = std::max(3, static_cast<int>(std::floor(g.region_w * shrink / kCellSize)));
  g.cells_h = std::max(3, static_cast<int>(std::floor(g.region_h * shrink / kCellSize)));
  g.patch = {g.cells_w * kCellSize, g.cells_h * kCellSize};
  return g;
}

}  // namespace mkcf
