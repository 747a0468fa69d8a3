#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "synthdim/config.hpp"
#include "synthdim/runs.hpp"

namespace {

using namespace synthdim;

struct SubcommandArgs {
  CLI::App* app = nullptr;
  Command command = Command::SweepPhi;
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

SubcommandArgs& add_subcommand(CLI::App& app, std::vector<std::unique_ptr<SubcommandArgs>>& all, Command cmd,
                               const std::string& description) {
  auto args = std::make_unique<SubcommandArgs>();
  args->command = cmd;
  args->app = app.add_subcommand(to_string(cmd), description);
  args->app->add_option("-c,--config", args->config_path, "config file (key = value lines)");
  for (const std::string& key : setting_keys()) {
    std::string flags = "--" + key;
    if (dashed(key) != key) flags += ",--" + dashed(key);
    args->app->add_option(flags, args->overrides[key], "overrides config key '" + key + "'");
  }
  all.push_back(std::move(args));
  return *all.back();
}

RunManifest build_manifest(const SubcommandArgs& args) {
  RunManifest m = default_manifest(args.command);
  if (!args.config_path.empty()) m = load_manifest(args.config_path, m);
  for (const std::string& key : setting_keys()) {
    const std::string flag = "--" + key;
    if (args.app->count(flag) > 0) apply_setting(m, key, args.overrides.at(key));
  }
  m.command = args.command;
  m.config.validate();
  return m;
}

void write_manifest(const RunManifest& m, OutputFiles& files) {
  const std::filesystem::path path = std::filesystem::path(resolve_output_dir(m)) / "manifest.cfg";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << serialize_manifest(m);
  if (!out) throw IoError("write failed", path.string());
  files.push_back(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective modes of a modulated atomic chain"};
  app.require_subcommand(1);
  std::vector<std::unique_ptr<SubcommandArgs>> subs;
  add_subcommand(app, subs, Command::Butterfly, "projected Bloch spectra over a Farey grid of flux values");
  add_subcommand(app, subs, Command::SweepPhi, "open-chain spectrum, labels and branches versus modulation phase");
  SubcommandArgs& modes = add_subcommand(app, subs, Command::Modes, "intensity profiles of modes in a detuning window");
  add_subcommand(app, subs, Command::GreensCheck, "pair couplings and closed-form vs truncated lattice sums");

  double det_min = 0.0, det_max = 0.0;
  modes.app->add_option("--det-min", det_min, "lower detuning of the selection window")->required();
  modes.app->add_option("--det-max", det_max, "upper detuning of the selection window")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const auto it = std::find_if(subs.begin(), subs.end(), [](const auto& s) { return s->app->parsed(); });
    const RunManifest m = build_manifest(**it);
    OutputFiles files;
    switch (m.command) {
      case Command::Butterfly: files = run_butterfly(m); break;
      case Command::SweepPhi: files = run_sweep_phi(m); break;
      case Command::Modes:
        if (det_min > det_max) throw ConfigError("--det-min exceeds --det-max", "det-min");
        files = run_modes(m, m.config.phase, det_min, det_max);
        break;
      case Command::GreensCheck: files = run_greens_check(m); break;
    }
    write_manifest(m, files);
    for (const auto& f : files) std::cout << f.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
