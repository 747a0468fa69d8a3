#include "synthdim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "synthdim/error.hpp"

namespace synthdim {

const char* to_string(Side s) {
  switch (s) {
    case Side::Left: return "Left";
    case Side::Right: return "Right";
    case Side::Bulk: return "Bulk";
  }
  return "?";
}

const char* to_string(Polarization p) {
  switch (p) {
    case Polarization::Plus: return "Plus";
    case Polarization::Minus: return "Minus";
    case Polarization::Mixed: return "Mixed";
  }
  return "?";
}

const char* to_string(Radiance r) { return r == Radiance::Superradiant ? "Superradiant" : "Subradiant"; }

ModeLabel classify_mode(const CollectiveMode& mode, const GapSet& gaps, const Thresholds& th) {
  const int n = mode.n_atoms();
  if (n < 1) throw std::invalid_argument("classify_mode needs a mode with amplitudes");
  if (th.window < 0 || th.window > n / 2)
    throw std::invalid_argument("boundary window must lie in [0, N/2]");

  const IntensityProfile prof = intensity_profile(mode);
  ModeLabel label;
  double total = 0.0, plus = 0.0;
  for (int i = 0; i < n; ++i) {
    total += prof.plus[i] + prof.minus[i];
    plus += prof.plus[i];
    if (i < th.window) label.left_weight += prof.plus[i] + prof.minus[i];
    if (i >= n - th.window) label.right_weight += prof.plus[i] + prof.minus[i];
  }
  if (total > 0.0) {
    label.left_weight /= total;
    label.right_weight /= total;
    plus /= total;
  }
  label.edge_weight = std::max(label.left_weight, label.right_weight);
  label.pol_fraction = plus;

  const bool left = label.left_weight > th.edge;
  const bool right = label.right_weight > th.edge;
  if (left && right) {
    label.side = Side::Bulk;
    label.ambiguous = true;
  } else if (left) {
    label.side = Side::Left;
  } else if (right) {
    label.side = Side::Right;
  }

  if (plus > th.polarization)
    label.polarization = Polarization::Plus;
  else if (plus < 1.0 - th.polarization)
    label.polarization = Polarization::Minus;

  label.radiance = mode.eigenvalue.decay > 1.0 ? Radiance::Superradiant : Radiance::Subradiant;
  label.in_gap = gaps.find(mode.eigenvalue.detuning, th.band_edge_tol).has_value();
  return label;
}

IntensityProfile intensity_profile(const CollectiveMode& mode) {
  const int n = mode.n_atoms();
  IntensityProfile prof;
  prof.plus.resize(static_cast<std::size_t>(n));
  prof.minus.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    prof.plus[i] = std::norm(mode.amplitudes[2 * i]);
    prof.minus[i] = std::norm(mode.amplitudes[2 * i + 1]);
  }
  return prof;
}

std::vector<Branch> track_branches(const SpectrumSet& sweep, const std::vector<ModeLabel>& labels,
                                   const GapSet& gaps, const Thresholds& th) {
  if (labels.size() != sweep.points.size()) throw std::invalid_argument("labels must align with the sweep");

  // Phase slices in ascending phase, independent of the sweep order.
  std::vector<double> phases;
  for (const SpectrumPoint& p : sweep.points) phases.push_back(p.sweep_coord);
  std::sort(phases.begin(), phases.end());
  phases.erase(std::unique(phases.begin(), phases.end()), phases.end());
  const std::size_t n_slices = phases.size();
  auto slice_of = [&](double phi) {
    return static_cast<std::size_t>(std::lower_bound(phases.begin(), phases.end(), phi) - phases.begin());
  };

  // The grid closes on itself when the step across 2pi matches the others.
  bool full_circle = false;
  if (n_slices >= 3) {
    const double step = (phases.back() - phases.front()) / static_cast<double>(n_slices - 1);
    const double wrap = phases.front() + kTwoPi - phases.back();
    full_circle = std::abs(wrap - step) < 1e-6 * step;
  }

  // Group candidates by (gap, side) and slice.
  using Key = std::pair<std::size_t, Side>;
  std::map<Key, std::vector<std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    const ModeLabel& l = labels[i];
    if (!l.in_gap || l.side == Side::Bulk) continue;
    const auto gap = gaps.find(sweep.points[i].detuning, th.band_edge_tol);
    if (!gap) continue;
    auto& slices = groups[{*gap, l.side}];
    if (slices.empty()) slices.resize(n_slices);
    slices[slice_of(sweep.points[i].sweep_coord)].push_back(i);
  }

  auto det = [&](std::size_t i) { return sweep.points[i].detuning; };
  std::vector<Branch> branches;

  for (auto& [key, slices] : groups) {
    std::vector<std::pair<std::size_t, std::size_t>> neighbours;  // (previous slice, slice)
    for (std::size_t s = 1; s < n_slices; ++s) neighbours.emplace_back(s - 1, s);
    if (full_circle) neighbours.emplace_back(n_slices - 1, 0);

    // Typical step: median nearest distance between neighbouring slices.
    std::vector<double> steps;
    for (auto [a, b] : neighbours)
      for (std::size_t j : slices[b]) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i : slices[a]) best = std::min(best, std::abs(det(i) - det(j)));
        if (std::isfinite(best)) steps.push_back(best);
      }
    double tol = std::numeric_limits<double>::infinity();
    if (!steps.empty()) {
      std::nth_element(steps.begin(), steps.begin() + steps.size() / 2, steps.end());
      tol = std::max(th.branch_jump_factor * steps[steps.size() / 2], 1e-12);
    }

    // Greedy matching on |delta|, smallest first; ties by detuning.
    std::map<std::size_t, std::size_t> next, prev;
    for (auto [a, b] : neighbours) {
      std::vector<std::tuple<double, double, double, std::size_t, std::size_t>> pairs;
      for (std::size_t i : slices[a])
        for (std::size_t j : slices[b]) {
          const double d = std::abs(det(i) - det(j));
          if (d <= tol) pairs.emplace_back(d, det(i), det(j), i, j);
        }
      std::sort(pairs.begin(), pairs.end());
      for (const auto& [d, di, dj, i, j] : pairs)
        if (!next.count(i) && !prev.count(j)) {
          next[i] = j;
          prev[j] = i;
        }
    }

    // Walk chains in ascending slice order; closed loops start at slice 0.
    std::map<std::size_t, bool> seen;
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s < n_slices; ++s)
      for (std::size_t i : slices[s])
        if (!prev.count(i)) starts.push_back(i);
    for (std::size_t s = 0; s < n_slices; ++s)
      for (std::size_t i : slices[s]) starts.push_back(i);

    for (std::size_t start : starts) {
      if (seen[start]) continue;
      Branch br;
      br.gap = key.first;
      br.side = key.second;
      br.jump_tol = tol;
      double offset = 0.0;
      std::size_t last_slice = slice_of(sweep.points[start].sweep_coord);
      int plus = 0, minus = 0;
      for (std::size_t cur = start;;) {
        seen[cur] = true;
        const SpectrumPoint& p = sweep.points[cur];
        const std::size_t s = slice_of(p.sweep_coord);
        if (s < last_slice) offset += kTwoPi;
        last_slice = s;
        br.points.push_back({p.sweep_coord + offset, p.detuning, p.decay, cur});
        if (labels[cur].polarization == Polarization::Plus) ++plus;
        if (labels[cur].polarization == Polarization::Minus) ++minus;
        const auto it = next.find(cur);
        if (it == next.end() || seen[it->second]) break;
        cur = it->second;
      }
      br.polarization = plus > minus ? Polarization::Plus
                        : minus > plus ? Polarization::Minus
                                       : Polarization::Mixed;
      branches.push_back(std::move(br));
    }
  }
  return branches;
}

namespace {

void check_continuity(const Branch& branch) {
  for (std::size_t i = 1; i < branch.points.size(); ++i) {
    const double jump = std::abs(branch.points[i].detuning - branch.points[i - 1].detuning);
    if (jump > branch.jump_tol) throw BranchDiscontinuity(branch.points[i].phase, jump, branch.jump_tol);
  }
}

}  // namespace

double branch_slope(const Branch& branch) {
  const auto& pts = branch.points;
  if (pts.size() < 3) throw std::invalid_argument("branch slope needs at least 3 points");
  check_continuity(branch);
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const double dphi = pts[i + 1].phase - pts[i - 1].phase;
    if (!(dphi > 0.0)) throw std::invalid_argument("branch phases must increase");
    sum += (pts[i + 1].detuning - pts[i - 1].detuning) / dphi;
  }
  return sum / static_cast<double>(pts.size() - 2);
}

std::pair<double, double> decay_range_along_branch(const Branch& branch, const GapSet& gaps,
                                                   double edge_exclusion) {
  if (branch.points.empty()) throw std::invalid_argument("empty branch");
  check_continuity(branch);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const bool has_gap = branch.gap < gaps.intervals.size();
  for (int pass = 0; pass < 2 && !std::isfinite(lo); ++pass)
    for (const BranchPoint& p : branch.points) {
      const bool inside = has_gap && p.detuning > gaps.intervals[branch.gap].lower + edge_exclusion &&
                          p.detuning < gaps.intervals[branch.gap].upper - edge_exclusion;
      if (pass == 0 && !inside) continue;
      lo = std::min(lo, p.decay);
      hi = std::max(hi, p.decay);
    }
  return {lo, hi};
}

}  // namespace synthdim
