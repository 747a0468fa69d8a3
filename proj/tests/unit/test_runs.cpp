#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "synthdim/runs.hpp"

using namespace synthdim;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

RunManifest manifest_in(Command cmd, const fs::path& dir) {
  RunManifest m = default_manifest(cmd);
  m.output_dir = dir.string();
  m.numerics.threads = 2;
  return m;
}

double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

TEST_CASE("format_real round-trips doubles") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 30));
    CHECK(std::strtod(format_real(x).c_str(), nullptr) == x);
  }
  CHECK(format_real(0.1) == "0.10000000000000001");
}

TEST_CASE("exit codes are distinct per error family") {
  CHECK(exit_code_for(ConfigError("x")) == kExitConfig);
  CHECK(exit_code_for(IoError("x", "p")) == kExitIo);
  CHECK(exit_code_for(NumericalError("x")) == kExitNumerical);
  CHECK(exit_code_for(LightLineSingular(0.1, 0.0)) == kExitNumerical);
  CHECK(exit_code_for(EmptySelection("x")) == kExitFailure);
  CHECK(exit_code_for(std::runtime_error("x")) == kExitFailure);
  CHECK(kExitConfig != kExitIo);
  CHECK(kExitConfig != kExitNumerical);
  CHECK(kExitIo != kExitNumerical);
}

TEST_CASE("spectrum writers") {
  SpectrumSet s;
  s.points.push_back({0.4, 1.5, 0.25, Origin::Bloch, 0.1, 0.2, 0});
  s.points.push_back({0.3, -2.0, 1.0, Origin::OpenChain, std::nullopt, 0.3, 1});
  std::ostringstream csv;
  write_spectrum_csv(s, csv);
  CHECK(csv.str() ==
        "sweep_coord,detuning,decay,origin,k,phase\n"
        "0.40000000000000002,1.5,0.25,bloch,0.10000000000000001,0.20000000000000001\n"
        "0.29999999999999999,-2,1,open_chain,,0.29999999999999999\n");

  std::ostringstream jsonl;
  write_spectrum_jsonl(s, jsonl);
  std::istringstream lines(jsonl.str());
  std::string line;
  std::getline(lines, line);
  const auto first = nlohmann::json::parse(line);
  CHECK(first["detuning"] == 1.5);
  CHECK(first["origin"] == "bloch");
  std::getline(lines, line);
  const auto second = nlohmann::json::parse(line);
  CHECK(second["k"].is_null());
  CHECK(second["phase"] == 0.3);
}

TEST_CASE("greens-check output") {
  const auto dir = testing::scratch_dir("greens");
  RunManifest m = manifest_in(Command::GreensCheck, dir);
  m.numerics.greens_k_points = 24;
  const OutputFiles files = run_greens_check(m);
  REQUIRE(files.size() == 2);

  const auto greens = testing::read_csv(dir / "greens.csv");
  CHECK(greens[0] == std::vector<std::string>{"d", "re_same", "im_same", "re_cross", "im_cross"});
  REQUIRE(greens.size() == 1 + 3 + 40);
  CHECK(num(greens[2][0]) == 1e-3);
  CHECK(num(greens[2][2]) == doctest::Approx(-0.5).epsilon(1e-4));

  const auto sums = testing::read_csv(dir / "blochsums.csv");
  REQUIRE(sums.size() == 1 + 2 * 24);
  for (std::size_t i = 1; i < sums.size(); ++i) {
    CHECK(sums[i][9] == "ok");
    CHECK(num(sums[i][7]) <= 1e-8);
    CHECK(num(sums[i][8]) <= 1e-8);
  }
  CHECK(sums[1][1] == "closed_form");
  CHECK(sums[2][1] == "truncated");

  const std::string before = testing::slurp(dir / "blochsums.csv");
  run_greens_check(m);
  CHECK(testing::slurp(dir / "blochsums.csv") == before);
}

TEST_CASE("greens-check reports light-line collisions") {
  // With 4 kappa points at +-pi/4 and +-3pi/4, spacing 1/8 puts two of
  // them on the light line.
  const auto dir = testing::scratch_dir("greens_light");
  RunManifest m = manifest_in(Command::GreensCheck, dir);
  m.config.spacing = 0.125;
  m.numerics.greens_k_points = 4;
  m.numerics.l_max = 10'000;
  run_greens_check(m);
  const auto sums = testing::read_csv(dir / "blochsums.csv");
  int singular = 0;
  for (std::size_t i = 1; i < sums.size(); ++i) singular += sums[i].back() == "light_line";
  CHECK(singular == 2);
}

TEST_CASE("sweep-phi on a single atom is the two-branch cosine") {
  const auto dir = testing::scratch_dir("sweep_single");
  RunManifest m = manifest_in(Command::SweepPhi, dir);
  m.config.n_atoms = 1;
  m.numerics.phi_points = 12;
  run_sweep_phi(m);
  const auto rows = testing::read_csv(dir / "spectrum_phi.csv");
  CHECK(rows[0] == std::vector<std::string>{"phase", "detuning", "decay"});
  REQUIRE(rows.size() == 1 + 24);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double phi = num(rows[i][0]);
    const double expected = 10.0 * std::abs(std::cos(phi + 2.0 * pi * m.config.flux));
    CHECK(std::abs(std::abs(num(rows[i][1])) - expected) < 1e-12);
    CHECK(num(rows[i][2]) == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto labels = testing::read_csv(dir / "labels.csv");
  CHECK(labels.size() == 25);
  CHECK(labels[0].size() == 13);
  CHECK(labels[1][3] == "Bulk");
  CHECK(fs::exists(dir / "gaps.csv"));
  CHECK(fs::exists(dir / "branches.csv"));
}

TEST_CASE("sweep-phi reruns are byte-identical") {
  const auto dir = testing::scratch_dir("sweep_rerun");
  RunManifest m = manifest_in(Command::SweepPhi, dir);
  m.config.n_atoms = 31;
  m.numerics.phi_points = 24;
  const OutputFiles files = run_sweep_phi(m);
  std::vector<std::string> first;
  for (const auto& f : files) first.push_back(testing::slurp(f));
  m.numerics.threads = 1;
  const OutputFiles again = run_sweep_phi(m);
  REQUIRE(again.size() == files.size());
  for (std::size_t i = 0; i < files.size(); ++i) CHECK(testing::slurp(again[i]) == first[i]);
  CHECK(testing::read_csv(dir / "branches.csv")[0].size() == 10);
}

TEST_CASE("modes: full window and empty window") {
  const auto dir = testing::scratch_dir("modes");
  RunManifest m = manifest_in(Command::Modes, dir);
  m.config.n_atoms = 11;
  const OutputFiles files = run_modes(m, 0.3, -1e9, 1e9);
  CHECK(files.size() == 1 + 22);
  const auto index = testing::read_csv(dir / "modes.csv");
  REQUIRE(index.size() == 23);
  for (std::size_t i = 1; i < index.size(); ++i) {
    const auto profile = testing::read_csv(dir / index[i].back());
    REQUIRE(profile.size() == 12);
    CHECK(profile[0] == std::vector<std::string>{"n", "plus", "minus"});
    double total = 0.0;
    for (std::size_t r = 1; r < profile.size(); ++r) total += num(profile[r][1]) + num(profile[r][2]);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  try {
    run_modes(m, 0.3, 100.0, 101.0);
    FAIL("expected EmptySelection");
  } catch (const EmptySelection& e) {
    CHECK(std::string(e.what()).find("nearest") != std::string::npos);
  }
}

TEST_CASE("butterfly output at Farey order 1") {
  const auto dir = testing::scratch_dir("butterfly");
  RunManifest m = manifest_in(Command::Butterfly, dir);
  m.numerics.farey_order = 1;
  m.numerics.k_samples = 4;
  m.numerics.phase_samples = 2;
  run_butterfly(m);
  const auto rows = testing::read_csv(dir / "butterfly.csv");
  CHECK(rows[0] == std::vector<std::string>{"b", "detuning", "decay", "k", "phase"});
  CHECK(rows.size() == 1 + 2 * 4 * 2 * 2);
  const auto summary = testing::read_csv(dir / "butterfly_summary.csv");
  REQUIRE(summary.size() == 3);
  CHECK(summary[1][1] == "16");
  const auto totals = nlohmann::json::parse(testing::slurp(dir / "butterfly_totals.json"));
  CHECK(totals["points"] == 32);
  CHECK(totals["decay_min"].get<double>() >= -1e-10);
}

TEST_CASE("unwritable output directories surface as IoError") {
  const auto dir = testing::scratch_dir("io");
  std::ofstream(dir / "file") << "x";
  RunManifest m = manifest_in(Command::GreensCheck, dir / "file" / "sub");
  m.numerics.greens_k_points = 2;
  CHECK_THROWS_AS(run_greens_check(m), IoError);
}
