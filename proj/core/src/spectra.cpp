#include "synthdim/spectra.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numbers>
#include <stdexcept>

#include "parallel.hpp"
#include "synthdim/error.hpp"
#include "synthdim/hamiltonian.hpp"

namespace synthdim {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<SpectrumPoint> sorted_points(const EigenResult& r, double coord, Origin origin,
                                         std::optional<double> kappa, std::optional<double> phase) {
  std::vector<SpectrumPoint> pts;
  pts.reserve(r.modes.size());
  int band = 0;
  for (const CollectiveMode& m : r.modes)
    pts.push_back({coord, m.eigenvalue.detuning, m.eigenvalue.decay, origin, kappa, phase, band++});
  return pts;
}

void check_decays(const EigenResult& r, double tol_psd) {
  for (const CollectiveMode& m : r.modes)
    if (m.eigenvalue.decay < -tol_psd)
      throw NumericalError(fmt::format("decay {:.3g} below -tol_psd = {:.3g}", m.eigenvalue.decay, -tol_psd),
                           m.eigenvalue.decay);
}

}  // namespace

const char* to_string(SweepKind k) {
  return k == SweepKind::ButterflyVsFlux ? "butterfly_vs_flux" : "open_chain_vs_phase";
}

const char* to_string(Origin o) { return o == Origin::Bloch ? "bloch" : "open_chain"; }

std::optional<std::size_t> GapSet::find(double detuning, double margin) const {
  for (std::size_t i = 0; i < intervals.size(); ++i)
    if (detuning > intervals[i].lower + margin && detuning < intervals[i].upper - margin) return i;
  return std::nullopt;
}

std::vector<std::size_t> GapSet::widest(std::size_t count) const {
  std::vector<std::size_t> idx(intervals.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return intervals[a].width() > intervals[b].width(); });
  idx.resize(std::min(count, idx.size()));
  std::sort(idx.begin(), idx.end());
  return idx;
}

double BandRegions::distance(double detuning) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Interval& b : bands) {
    if (detuning >= b.lower && detuning <= b.upper) return 0.0;
    best = std::min(best, std::min(std::abs(detuning - b.lower), std::abs(detuning - b.upper)));
  }
  return best;
}

std::vector<double> supercell_k_grid(int q, int k_samples, double spacing, double eps_light) {
  if (q < 1 || k_samples < 1) throw ConfigError("k grid needs q >= 1 and k_samples >= 1", "k_samples");
  const double theta0 = kTwoPi * spacing;
  const double period = kTwoPi / q;  // singular phases repeat with this period
  const double guard = std::max(kPi / (static_cast<double>(k_samples) * q), 2.0 * eps_light);
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(k_samples));
  for (int i = 0; i < k_samples; ++i) {
    double kappa = (-kPi + kTwoPi * (i + 0.5) / k_samples) / q;
    for (int round = 0; round < 2; ++round)
      for (double center : {theta0, -theta0}) {
        const double r = std::remainder(kappa - center, period);
        if (std::abs(r) < guard) kappa += (r >= 0.0 ? guard - r : -guard - r);
      }
    // Back into the zone; a shift by 2 pi / q is a gauge change.
    kappa = std::remainder(kappa, period);
    if (near_light_line(kappa, spacing, eps_light)) throw LightLineSingular(kappa, 0.0);
    grid.push_back(kappa);
  }
  return grid;
}

std::vector<double> supercell_phase_grid(int q, int phase_samples) {
  if (q < 1 || phase_samples < 1) throw ConfigError("phase grid needs phase_samples >= 1", "phase_samples");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(phase_samples));
  for (int j = 0; j < phase_samples; ++j) grid.push_back(kTwoPi * j / (static_cast<double>(phase_samples) * q));
  return grid;
}

std::vector<double> uniform_phase_grid(int points) {
  if (points < 1) throw ConfigError("phi_points must be >= 1", "phi_points");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) grid.push_back(kTwoPi * j / points);
  return grid;
}

SpectrumSet butterfly_sweep(const std::vector<Rational>& flux_grid, double spacing, double zeeman_amp,
                            const SweepOptions& opts) {
  // One task per (flux, kappa); the couplings are shared by all phases.
  struct Task {
    Rational flux;
    double kappa;
    const std::vector<double>* phases;
  };
  std::vector<std::vector<double>> phase_grids;
  phase_grids.reserve(flux_grid.size());
  std::vector<Task> tasks;
  for (const Rational& f : flux_grid) {
    const int q = static_cast<int>(f.q);
    phase_grids.push_back(supercell_phase_grid(q, opts.phase_samples));
    for (double k : supercell_k_grid(q, opts.k_samples, spacing, opts.lattice.eps_light))
      tasks.push_back({f, k, &phase_grids.back()});
  }

  std::vector<std::vector<SpectrumPoint>> slots(tasks.size());
  detail::parallel_for(tasks.size(), opts.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    double phi = 0.0;
    try {
      const std::vector<BlochCoupling> couplings =
          supercell_couplings(static_cast<int>(t.flux.q), t.kappa, spacing, opts.lattice);
      for (double p : *t.phases) {
        phi = p;
        const BlochHamiltonian h = build_bloch(t.flux, t.kappa, p, zeeman_amp, couplings);
        const EigenResult r = eigendecompose(h.matrix, opts.eigen);
        check_decays(r, opts.tol_psd);
        std::vector<SpectrumPoint> pts = sorted_points(r, t.flux.value(), Origin::Bloch, t.kappa, p);
        slots[i].insert(slots[i].end(), pts.begin(), pts.end());
      }
    } catch (const std::exception& e) {
      throw NumericalError(
          fmt::format("b = {}, kappa = {:.17g}, phi = {:.17g}: {}", t.flux.str(), t.kappa, phi, e.what()));
    }
  });

  SpectrumSet out;
  out.kind = SweepKind::ButterflyVsFlux;
  for (auto& s : slots) out.points.insert(out.points.end(), s.begin(), s.end());
  return out;
}

SpectrumSet open_chain_sweep(const ChainConfig& base, const std::vector<double>& phase_grid,
                             const EigenOptions& eigen, int threads, double tol_psd) {
  base.validate();
  std::vector<EigenResult> results(phase_grid.size());
  detail::parallel_for(phase_grid.size(), threads, [&](std::size_t i) {
    ChainConfig c = base;
    c.phase = phase_grid[i];
    results[i] = eigendecompose(build_finite(c).matrix, eigen);
    check_decays(results[i], tol_psd);
  });

  SpectrumSet out;
  out.kind = SweepKind::OpenChainVsPhase;
  for (std::size_t i = 0; i < phase_grid.size(); ++i) {
    const double phi = reduce_phase(phase_grid[i]);
    auto pts = sorted_points(results[i], phi, Origin::OpenChain, std::nullopt, phi);
    out.points.insert(out.points.end(), pts.begin(), pts.end());
    for (CollectiveMode& m : results[i].modes) out.modes.push_back(std::move(m));
  }
  return out;
}

BandRegions projected_bands(const SpectrumSet& spectrum) {
  std::vector<Interval> raw;
  std::map<int, Interval> bloch;
  std::optional<double> coord;
  for (const SpectrumPoint& p : spectrum.points) {
    if (p.origin == Origin::OpenChain || p.band < 0) {
      raw.push_back({p.detuning, p.detuning});
      continue;
    }
    if (coord && *coord != p.sweep_coord)
      throw std::invalid_argument("projected bands need a Bloch spectrum at a single flux");
    coord = p.sweep_coord;
    auto [it, fresh] = bloch.try_emplace(p.band, Interval{p.detuning, p.detuning});
    if (!fresh) {
      it->second.lower = std::min(it->second.lower, p.detuning);
      it->second.upper = std::max(it->second.upper, p.detuning);
    }
  }
  for (const auto& [band, iv] : bloch) raw.push_back(iv);
  std::sort(raw.begin(), raw.end(), [](const Interval& a, const Interval& b) {
    return a.lower != b.lower ? a.lower < b.lower : a.upper < b.upper;
  });

  BandRegions out;
  for (const Interval& iv : raw) {
    if (!out.bands.empty() && iv.lower <= out.bands.back().upper)
      out.bands.back().upper = std::max(out.bands.back().upper, iv.upper);
    else
      out.bands.push_back(iv);
  }
  return out;
}

GapSet detect_gaps(const SpectrumSet& spectrum, double min_gap_width) {
  if (spectrum.points.empty()) throw std::invalid_argument("cannot detect gaps in an empty spectrum");
  const BandRegions regions = projected_bands(spectrum);
  GapSet gaps;
  for (std::size_t i = 1; i < regions.bands.size(); ++i) {
    const Gap g{regions.bands[i - 1].upper, regions.bands[i].lower};
    if (g.width() > 0.0 && g.width() >= min_gap_width) gaps.intervals.push_back(g);
  }
  return gaps;
}

GapSet bulk_gaps(double flux, double spacing, double zeeman_amp, long q_max, double min_gap_width,
                 const SweepOptions& opts) {
  const Rational r = best_rational(flux, q_max);
  const long q = r.q;
  SweepOptions scaled = opts;
  scaled.k_samples = static_cast<int>(std::max<long>(4, (opts.k_samples + q - 1) / q));
  scaled.phase_samples = static_cast<int>(std::max<long>(2, (opts.phase_samples + q - 1) / q));
  return detect_gaps(butterfly_sweep({r}, spacing, zeeman_amp, scaled), min_gap_width);
}

}  // namespace synthdim
