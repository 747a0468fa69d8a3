#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "synthdim/analysis.hpp"
#include "synthdim/config.hpp"
#include "synthdim/error.hpp"
#include "synthdim/spectra.hpp"

namespace synthdim {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitIo = 4,
};

int exit_code_for(const std::exception& e);

/// 17 significant digits, round-trip exact for doubles.
std::string format_real(double x);

/// Columns: sweep_coord,detuning,decay,origin,k,phase (k/phase empty when
/// not applicable).
void write_spectrum_csv(const SpectrumSet& spectrum, std::ostream& out);

/// One JSON object per point with the same fields as the CSV.
void write_spectrum_jsonl(const SpectrumSet& spectrum, std::ostream& out);

/// Columns: n,plus,minus with n starting at 1.
void write_profile_csv(const IntensityProfile& profile, std::ostream& out);

/// Thrown by run_modes when the detuning window selects nothing.
class EmptySelection : public Error {
 public:
  using Error::Error;
};

using OutputFiles = std::vector<std::filesystem::path>;

/// butterfly.csv (b,detuning,decay,k,phase), butterfly.jsonl,
/// butterfly_summary.csv (b,points,decay_min,decay_max,gaps) and
/// butterfly_totals.json.
OutputFiles run_butterfly(const RunManifest& manifest);

/// spectrum_phi.csv (phase,detuning,decay), spectrum_phi.jsonl, labels.csv, branches.csv and
/// gaps.csv for an open chain over a uniform phase grid.
OutputFiles run_sweep_phi(const RunManifest& manifest);

/// Profiles of every mode at `phase` whose detuning lies in [lo, hi]:
/// mode_<i>.csv (n,plus,minus) plus modes.csv with their labels.
OutputFiles run_modes(const RunManifest& manifest, double phase, double lo, double hi);

/// greens.csv (pair couplings on a separation grid) and blochsums.csv
/// (closed form vs truncated lattice sums on a kappa grid).
OutputFiles run_greens_check(const RunManifest& manifest);

}  // namespace synthdim
