#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "synthdim/spectra.hpp"
#include "synthdim/types.hpp"

namespace synthdim {

enum class Side { Left, Right, Bulk };
enum class Polarization { Plus, Minus, Mixed };
enum class Radiance { Superradiant, Subradiant };

const char* to_string(Side s);
const char* to_string(Polarization p);
const char* to_string(Radiance r);

struct Thresholds {
  int window = 10;                   // boundary window, atoms
  double edge = 0.5;                 // edge_weight needed for a boundary label
  double polarization = 0.7;         // pol_fraction needed for Plus (1 - this for Minus)
  double band_edge_tol = 0.05;       // in-gap margin from the band edges
  double band_edge_exclusion = 0.2;  // hybridization zone excluded from branch statistics
  double branch_jump_factor = 5.0;   // jump tolerance / typical step

  bool operator==(const Thresholds&) const = default;
};

struct ModeLabel {
  Side side = Side::Bulk;
  Polarization polarization = Polarization::Mixed;
  Radiance radiance = Radiance::Subradiant;
  double edge_weight = 0.0;  // max of the two window weights
  double left_weight = 0.0;
  double right_weight = 0.0;
  double pol_fraction = 0.0;  // sum_n |C_{n,+}|^2
  bool in_gap = false;
  bool ambiguous = false;  // both windows above threshold

  bool operator==(const ModeLabel&) const = default;
};

/// Label of one finite-chain mode. window must not exceed N / 2 (throws
/// std::invalid_argument otherwise).
ModeLabel classify_mode(const CollectiveMode& mode, const GapSet& gaps,
                        const Thresholds& th = {});

struct IntensityProfile {
  std::vector<double> plus;   // |C_{n,+}|^2
  std::vector<double> minus;  // |C_{n,-}|^2
};

IntensityProfile intensity_profile(const CollectiveMode& mode);

struct BranchPoint {
  double phase = 0.0;
  double detuning = 0.0;
  double decay = 0.0;
  std::size_t point = 0;  // index into the sweep
};

/// A run of in-gap boundary modes followed continuously across the phase
/// grid, at one boundary inside one gap.
struct Branch {
  std::size_t gap = 0;
  Side side = Side::Bulk;
  Polarization polarization = Polarization::Mixed;  // majority over members
  std::vector<BranchPoint> points;                  // ascending unwrapped phase
  double jump_tol = 0.0;
};

/// Groups the in-gap, non-bulk modes of an open-chain phase sweep into
/// branches. Consecutive phase slices are linked by a greedy global matching
/// on |delta detuning| (smallest first), so the result does not depend on the
/// sweep direction. A branch that reaches the end of a full-circle grid is
/// joined to one starting at phi = 0. `labels` is index-aligned with
/// `sweep.points`.
std::vector<Branch> track_branches(const SpectrumSet& sweep, const std::vector<ModeLabel>& labels,
                                   const GapSet& gaps, const Thresholds& th = {});

/// Mean of the central finite differences d(detuning)/d(phi) along the
/// branch. Needs >= 3 points; throws BranchDiscontinuity on a jump above
/// branch.jump_tol.
double branch_slope(const Branch& branch);

/// (min, max) decay over the branch points whose detuning lies more than
/// `edge_exclusion` inside the gap. Falls back to every point when none do.
std::pair<double, double> decay_range_along_branch(const Branch& branch, const GapSet& gaps,
                                                   double edge_exclusion = 0.0);

}  // namespace synthdim
