#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>

#include "commands.hpp"
#include "common.hpp"
#include "mkcf/image_io.hpp"
#include "mkcf/results_io.hpp"
#include "mkcf/synth.hpp"

namespace mkcf::cli {

namespace {

struct SynthOptions {
  std::string name;
  std::uint64_t seed = 0;
  std::string out;
};

std::string frame_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d.png", index);
  return buf;
}

int run_synth(const SynthOptions& o, const std::vector<std::string>& argv) {
  const Sequence seq = synth_sequence(synth_preset(o.name), o.seed);
  const std::filesystem::path out(o.out);
  std::filesystem::create_directories(out / "img");
  std::string gt;
  for (int i = 0; i < seq.size(); ++i) {
    write_image(out / "img" / frame_name(i + 1), seq.frames[static_cast<std::size_t>(i)]);
    const BoundingBox& b = seq.groundtruth[static_cast<std::size_t>(i)];
    std::ostringstream line;
    line.precision(17);
    line << b.x + 1.0 << "," << b.y + 1.0 << "," << b.w << "," << b.h << "\n";
    gt += line.str();
  }
  write_text_atomic(out / "groundtruth_rect.txt", gt);

  nlohmann::json manifest = base_manifest("synth", argv);
  manifest["inputs"] = {{"synth", o.name}, {"seed", o.seed}};
  manifest["sequence"] = {{"name", seq.name}, {"frames", seq.size()}};
  manifest["timing"] = {{"mean_fps", nullptr}};
  manifest["outputs"] = {"img/", "groundtruth_rect.txt"};
  write_manifest(out, manifest);
  std::cout << "wrote " << seq.size() << " frames of '" << o.name << "' to " << out.string() << "\n";
  return kExitOk;
}

}  // namespace

void register_synth(CLI::App& app, Action& action, const std::vector<std::string>& argv) {
  auto o = std::make_shared<SynthOptions>();
  CLI::App* cmd = app.add_subcommand("synth", "Write a synthetic sequence in OTB layout");
  cmd->add_option("--name", o->name, "Preset: translate, zoom, phase or static")->required();
  cmd->add_option("--seed", o->seed, "Texture and noise seed")->required();
  cmd->add_option("--out", o->out, "Output directory")->required();
  cmd->callback([&action, o, argv] { action = [o, argv] { return run_synth(*o, argv); }; });
}

}  // namespace mkcf::cli
