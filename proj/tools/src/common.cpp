#include "common.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mkcf/results_io.hpp"
#include "mkcf/synth.hpp"

#ifndef MKCF_TOOL_VERSION
#define MKCF_TOOL_VERSION "0.3.0"
#endif

namespace mkcf::cli {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kUnsupportedFeature:
      return kExitUsage;
    case ErrorKind::kIo:
    case ErrorKind::kParse:
    case ErrorKind::kSequence:
      return kExitIo;
    default:
      return kExitNumerical;
  }
}

Sequence SequenceInput::load() const {
  if (!sequence_dir.empty() && !synth.empty()) {
    raise(ErrorKind::kInvalidArgument, "--sequence and --synth are mutually exclusive");
  }
  if (!sequence_dir.empty()) return load_otb_sequence(sequence_dir);
  if (synth.empty()) raise(ErrorKind::kInvalidArgument, "one of --sequence or --synth is required");
  if (!seed) raise(ErrorKind::kInvalidArgument, "--seed is required with --synth");
  return synth_sequence(synth_preset(synth), *seed);
}

nlohmann::json SequenceInput::describe() const {
  nlohmann::json j;
  if (!sequence_dir.empty()) j["sequence"] = std::filesystem::absolute(sequence_dir).string();
  if (!synth.empty()) j["synth"] = synth;
  if (seed) j["seed"] = *seed;
  return j;
}

void apply_overrides(TrackerConfig& config, const std::vector<std::string>& overrides) {
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      raise(ErrorKind::kInvalidArgument, "--config expects key=value, got '" + kv + "'");
    }
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

nlohmann::json base_manifest(const std::string& command, const std::vector<std::string>& argv) {
  return {{"tool", "mkcf"}, {"version", MKCF_TOOL_VERSION}, {"command", command}, {"argv", argv}};
}

void write_manifest(const std::filesystem::path& out_dir, const nlohmann::json& manifest) {
  write_json_atomic(out_dir / "manifest.json", manifest);
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    double v = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
      raise(ErrorKind::kInvalidArgument, "not a number in list: '" + token + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) raise(ErrorKind::kInvalidArgument, "empty number list");
  return out;
}

}  // namespace mkcf::cli
