#pragma once

#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace mkcf::cli {

/// Runs the selected subcommand and returns its exit status.
using Action = std::function<int()>;

void register_track(CLI::App& app, Action& action, const std::vector<std::string>& argv);
void register_eval(CLI::App& app, Action& action, const std::vector<std::string>& argv);
void register_synth(CLI::App& app, Action& action, const std::vector<std::string>& argv);
void register_diag(CLI::App& app, Action& action, const std::vector<std::string>& argv);

}  // namespace mkcf::cli
