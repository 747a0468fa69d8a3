#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "synthdim/analysis.hpp"
#include "synthdim/spectra.hpp"
#include "synthdim/types.hpp"

namespace synthdim {

enum class Command { Butterfly, SweepPhi, Modes, GreensCheck };

const char* to_string(Command c);

/// Every numerical knob of a run. Keys in the config file use these names.
struct Numerics {
  int k_samples = 64;
  int phase_samples = 32;
  int phi_points = 201;
  int farey_order = 50;
  long q_max = 100;
  double eps_light = 1e-6;
  long l_max = 1'000'000;
  double tol_eig = 1e-9;
  double tol_psd = 1e-10;
  double min_gap_width = 0.25;
  int greens_k_points = 100;
  int threads = 0;
  Thresholds thresholds;

  bool operator==(const Numerics&) const = default;
};

/// Everything a run needs. A manifest determines every output byte.
struct RunManifest {
  Command command = Command::SweepPhi;
  ChainConfig config;
  Numerics numerics;
  std::string output_dir = ".";
  bool seedless = true;
};

/// Reference defaults: N = 101, a = 0.1, mu B0 = 10, b = sqrt(5)/10.
RunManifest default_manifest(Command command = Command::SweepPhi);

/// Evaluates a numeric config value: a literal, `pi`, `sqrt(...)`, and the
/// operators + - * / with parentheses, e.g. "sqrt(5)/10" or "0.3*pi".
/// Throws ConfigError on malformed or non-finite input.
double parse_real(const std::string& text);

/// Every key accepted by apply_setting, in serialization order.
const std::vector<std::string>& setting_keys();

/// Sets one key (config-file spelling). Throws ConfigError naming the key.
void apply_setting(RunManifest& manifest, const std::string& key, const std::string& value,
                   std::size_t line = 0);

/// Reads `key = value` lines; '#' starts a comment. Unknown or repeated keys
/// and bad values throw ConfigError with key and line number.
RunManifest parse_manifest(std::istream& in, RunManifest base = default_manifest());
RunManifest load_manifest(const std::string& path, RunManifest base = default_manifest());

/// Inverse of parse_manifest; reals printed with 17 significant digits.
std::string serialize_manifest(const RunManifest& manifest);

/// Output directory, overridden by $SYNTHDIM_OUTPUT_DIR when set.
std::string resolve_output_dir(const RunManifest& manifest);

SweepOptions sweep_options(const Numerics& numerics);
LatticeSumOptions lattice_options(const Numerics& numerics);

}  // namespace synthdim
