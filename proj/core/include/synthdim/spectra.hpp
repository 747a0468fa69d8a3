#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "synthdim/eigensolver.hpp"
#include "synthdim/greens.hpp"
#include "synthdim/rational.hpp"
#include "synthdim/types.hpp"

namespace synthdim {

enum class SweepKind { ButterflyVsFlux, OpenChainVsPhase };
enum class Origin { Bloch, OpenChain };

const char* to_string(SweepKind k);
const char* to_string(Origin o);

struct SpectrumPoint {
  double sweep_coord = 0.0;  // b for butterfly runs, phi for open-chain runs
  double detuning = 0.0;
  double decay = 0.0;
  Origin origin = Origin::Bloch;
  std::optional<double> kappa;  // Bloch phase per site
  std::optional<double> phase;
  int band = -1;  // rank of the detuning within its (b, k, phi) sample
};

struct SpectrumSet {
  SweepKind kind = SweepKind::ButterflyVsFlux;
  std::vector<SpectrumPoint> points;
  /// Open-chain sweeps keep the full modes, index-aligned with `points`.
  std::vector<CollectiveMode> modes;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
};

using Gap = Interval;

/// Union of projected band intervals, merged and sorted.
struct BandRegions {
  std::vector<Interval> bands;

  /// Detuning distance to the nearest band, 0 inside one.
  double distance(double detuning) const;
};

/// Disjoint, sorted detuning intervals free of bulk eigenvalues.
struct GapSet {
  std::vector<Gap> intervals;

  /// Index of the gap holding `detuning` at distance > margin from both
  /// edges, if any.
  std::optional<std::size_t> find(double detuning, double margin = 0.0) const;

  /// Indices of the `count` widest gaps, returned in ascending detuning.
  std::vector<std::size_t> widest(std::size_t count) const;
};

struct SweepOptions {
  int k_samples = 64;      // per supercell zone
  int phase_samples = 32;  // per phase period 2 pi / q
  LatticeSumOptions lattice;
  EigenOptions eigen{.tol_eig = 1e-9, .vectors = false};
  double tol_psd = 1e-10;  // decays below -tol_psd raise NumericalError
  int threads = 0;  // 0 = all hardware threads
};

/// Per-site Bloch phases for a supercell of q sites: K points on the
/// half-offset grid q kappa = -pi + 2 pi (i + 1/2) / K, each pushed to at
/// least max(pi / (K q), 2 eps_light) away from every light line.
std::vector<double> supercell_k_grid(int q, int k_samples, double spacing, double eps_light);

/// phi_j = 2 pi j / (P q), j < P. The Bloch spectrum is periodic in phi with
/// period 2 pi / q, so this covers every phase.
std::vector<double> supercell_phase_grid(int q, int phase_samples);

/// phi_j = 2 pi j / points over [0, 2 pi).
std::vector<double> uniform_phase_grid(int points);

/// Projected infinite-chain spectrum: for each flux and every (kappa, phi)
/// sample, all 2q eigenvalues of the supercell Hamiltonian. Output order
/// follows (flux, kappa, phi, band) regardless of threading. Errors are
/// rethrown with the offending (b, kappa, phi) in the message.
SpectrumSet butterfly_sweep(const std::vector<Rational>& flux_grid, double spacing,
                            double zeeman_amp, const SweepOptions& opts = {});

/// Open-chain spectrum for each phase of the grid; keeps the full modes.
/// Decays below -tol_psd raise NumericalError.
SpectrumSet open_chain_sweep(const ChainConfig& base, const std::vector<double>& phase_grid,
                             const EigenOptions& eigen = {}, int threads = 0, double tol_psd = 1e-10);

/// Complement of projected_bands inside the spectral range. Gaps narrower
/// than min_gap_width are dropped. Throws std::invalid_argument when empty.
GapSet detect_gaps(const SpectrumSet& spectrum, double min_gap_width);

/// Gaps of the infinite chain at flux b, via the best rational approximant
/// p/q with q <= q_max. The supercell zone is 1/q of the single-site zone,
/// so k_samples and phase_samples are divided by q (at least 4 and 2 remain)
/// to keep the per-site resolution of opts.
GapSet bulk_gaps(double flux, double spacing, double zeeman_amp, long q_max,
                 double min_gap_width, const SweepOptions& opts = {});

/// Bloch points are grouped into bands by their `band` rank and each band
/// contributes the interval [min, max] of its sampled detunings; open-chain
/// points contribute themselves as degenerate intervals.
BandRegions projected_bands(const SpectrumSet& spectrum);

}  // namespace synthdim
