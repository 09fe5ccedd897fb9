#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mkcf/errors.hpp"
#include "mkcf/sequence.hpp"
#include "mkcf/tracker.hpp"

namespace mkcf::cli {

/// Process exit statuses.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitIo = 3,
  kExitNumerical = 4,
  kExitDrift = 5,
  kExitCheckFailed = 6,
};

int exit_code_for(ErrorKind kind);

/// Where a command's frames come from: an OTB directory or a named preset.
struct SequenceInput {
  std::string sequence_dir;
  std::string synth;
  std::optional<std::uint64_t> seed;

  Sequence load() const;
  nlohmann::json describe() const;
};

/// Applies repeated key=value overrides.
void apply_overrides(TrackerConfig& config, const std::vector<std::string>& overrides);

/// Common manifest fields; callers add command-specific sections.
nlohmann::json base_manifest(const std::string& command, const std::vector<std::string>& argv);

void write_manifest(const std::filesystem::path& out_dir, const nlohmann::json& manifest);

std::vector<double> parse_real_list(const std::string& text);

}  // namespace mkcf::cli
