#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "common.hpp"

int main(int argc, char** argv) {
  using namespace mkcf::cli;
  const std::vector<std::string> args(argv, argv + argc);

  CLI::App app{"Multi-kernel correlation filter tracking toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MKCF_TOOL_VERSION);
  Action action;
  register_track(app, action, args);
  register_eval(app, action, args);
  register_synth(app, action, args);
  register_diag(app, action, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const mkcf::Error& e) {
    std::cerr << "error (" << mkcf::to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
