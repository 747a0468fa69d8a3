#include "synthdim/runs.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "parallel.hpp"
#include "synthdim/eigensolver.hpp"
#include "synthdim/greens.hpp"
#include "synthdim/hamiltonian.hpp"

namespace synthdim {
namespace fs = std::filesystem;
namespace {

fs::path prepare_dir(const RunManifest& m) {
  const fs::path dir = resolve_output_dir(m);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + ec.message(), dir.string());
  return dir;
}

// Writes through a string buffer so a failed run never leaves half a file.
class FileWriter {
 public:
  explicit FileWriter(fs::path path) : path_(std::move(path)) {}
  std::ostream& out() { return buf_; }
  fs::path commit() {
    std::ofstream f(path_, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing", path_.string());
    f << buf_.str();
    f.close();
    if (!f) throw IoError("write failed", path_.string());
    return path_;
  }

 private:
  fs::path path_;
  std::ostringstream buf_;
};

std::string opt_real(const std::optional<double>& x) { return x ? format_real(*x) : std::string(); }

Thresholds clamped(const Thresholds& th, int n_atoms) {
  Thresholds t = th;
  t.window = std::min(t.window, n_atoms / 2);
  return t;
}

EigenOptions mode_options(const Numerics& n) { return {.tol_eig = n.tol_eig, .vectors = true}; }

GapSet chain_gaps(const RunManifest& m) {
  const ChainConfig& c = m.config;
  return bulk_gaps(c.flux, c.spacing, c.zeeman_amp, m.numerics.q_max, m.numerics.min_gap_width,
                   sweep_options(m.numerics));
}

void write_label_fields(std::ostream& out, const ModeLabel& l) {
  out << to_string(l.side) << ',' << to_string(l.polarization) << ',' << to_string(l.radiance) << ','
      << format_real(l.edge_weight) << ',' << format_real(l.left_weight) << ','
      << format_real(l.right_weight) << ',' << format_real(l.pol_fraction) << ',' << (l.in_gap ? 1 : 0)
      << ',' << (l.ambiguous ? 1 : 0);
}

constexpr const char* kLabelColumns =
    "side,polarization,radiance,edge_weight,left_weight,right_weight,pol_fraction,in_gap,ambiguous";

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const LightLineSingular*>(&e))
    return kExitNumerical;
  return kExitFailure;
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

void write_spectrum_csv(const SpectrumSet& spectrum, std::ostream& out) {
  out << "sweep_coord,detuning,decay,origin,k,phase\n";
  for (const SpectrumPoint& p : spectrum.points)
    out << format_real(p.sweep_coord) << ',' << format_real(p.detuning) << ',' << format_real(p.decay) << ','
        << to_string(p.origin) << ',' << opt_real(p.kappa) << ',' << opt_real(p.phase) << '\n';
}

void write_spectrum_jsonl(const SpectrumSet& spectrum, std::ostream& out) {
  for (const SpectrumPoint& p : spectrum.points) {
    nlohmann::ordered_json j;
    j["sweep_coord"] = p.sweep_coord;
    j["detuning"] = p.detuning;
    j["decay"] = p.decay;
    j["origin"] = to_string(p.origin);
    j["k"] = p.kappa ? nlohmann::ordered_json(*p.kappa) : nlohmann::ordered_json(nullptr);
    j["phase"] = p.phase ? nlohmann::ordered_json(*p.phase) : nlohmann::ordered_json(nullptr);
    out << j.dump() << '\n';
  }
}

void write_profile_csv(const IntensityProfile& profile, std::ostream& out) {
  out << "n,plus,minus\n";
  for (std::size_t i = 0; i < profile.plus.size(); ++i)
    out << i + 1 << ',' << format_real(profile.plus[i]) << ',' << format_real(profile.minus[i]) << '\n';
}

OutputFiles run_butterfly(const RunManifest& m) {
  const fs::path dir = prepare_dir(m);
  const std::vector<Rational> fluxes = farey_sequence(m.numerics.farey_order);
  const SpectrumSet sweep =
      butterfly_sweep(fluxes, m.config.spacing, m.config.zeeman_amp, sweep_options(m.numerics));

  OutputFiles files;
  FileWriter csv(dir / "butterfly.csv");
  csv.out() << "b,detuning,decay,k,phase\n";
  for (const SpectrumPoint& p : sweep.points)
    csv.out() << format_real(p.sweep_coord) << ',' << format_real(p.detuning) << ',' << format_real(p.decay)
              << ',' << opt_real(p.kappa) << ',' << opt_real(p.phase) << '\n';

  FileWriter jsonl(dir / "butterfly.jsonl");
  write_spectrum_jsonl(sweep, jsonl.out());

  // Per-flux summary. Points of one flux are contiguous.
  FileWriter summary(dir / "butterfly_summary.csv");
  summary.out() << "b,points,decay_min,decay_max,gaps\n";
  double lo_all = std::numeric_limits<double>::infinity(), hi_all = -lo_all;
  std::size_t begin = 0;
  for (const Rational& f : fluxes) {
    SpectrumSet one;
    one.kind = sweep.kind;
    const double b = f.value();
    std::size_t end = begin;
    while (end < sweep.points.size() && sweep.points[end].sweep_coord == b) ++end;
    one.points.assign(sweep.points.begin() + static_cast<std::ptrdiff_t>(begin),
                      sweep.points.begin() + static_cast<std::ptrdiff_t>(end));
    begin = end;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const SpectrumPoint& p : one.points) {
      lo = std::min(lo, p.decay);
      hi = std::max(hi, p.decay);
    }
    lo_all = std::min(lo_all, lo);
    hi_all = std::max(hi_all, hi);
    const std::size_t n_gaps = one.points.empty() ? 0 : detect_gaps(one, m.numerics.min_gap_width).intervals.size();
    summary.out() << format_real(b) << ',' << one.points.size() << ',' << format_real(lo) << ','
                  << format_real(hi) << ',' << n_gaps << '\n';
  }

  FileWriter totals(dir / "butterfly_totals.json");
  nlohmann::ordered_json t;
  t["farey_order"] = m.numerics.farey_order;
  t["fluxes"] = fluxes.size();
  t["points"] = sweep.points.size();
  t["decay_min"] = lo_all;
  t["decay_max"] = hi_all;
  totals.out() << t.dump(2) << '\n';

  files.push_back(csv.commit());
  files.push_back(jsonl.commit());
  files.push_back(summary.commit());
  files.push_back(totals.commit());
  return files;
}

OutputFiles run_sweep_phi(const RunManifest& m) {
  const fs::path dir = prepare_dir(m);
  const ChainConfig base = m.config.normalized();
  const SpectrumSet sweep = open_chain_sweep(base, uniform_phase_grid(m.numerics.phi_points),
                                             mode_options(m.numerics), m.numerics.threads, m.numerics.tol_psd);
  const GapSet gaps = chain_gaps(m);
  const Thresholds th = clamped(m.numerics.thresholds, base.n_atoms);

  std::vector<ModeLabel> labels(sweep.modes.size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = classify_mode(sweep.modes[i], gaps, th);
  const std::vector<Branch> branches = track_branches(sweep, labels, gaps, th);
  std::vector<long> branch_of(sweep.points.size(), -1);
  for (std::size_t b = 0; b < branches.size(); ++b)
    for (const BranchPoint& p : branches[b].points) branch_of[p.point] = static_cast<long>(b);

  FileWriter spectrum(dir / "spectrum_phi.csv");
  spectrum.out() << "phase,detuning,decay\n";
  for (const SpectrumPoint& p : sweep.points)
    spectrum.out() << format_real(p.sweep_coord) << ',' << format_real(p.detuning) << ','
                   << format_real(p.decay) << '\n';

  FileWriter jsonl(dir / "spectrum_phi.jsonl");
  write_spectrum_jsonl(sweep, jsonl.out());

  FileWriter label_csv(dir / "labels.csv");
  label_csv.out() << "phase,detuning,decay," << kLabelColumns << ",branch\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const SpectrumPoint& p = sweep.points[i];
    label_csv.out() << format_real(p.sweep_coord) << ',' << format_real(p.detuning) << ','
                    << format_real(p.decay) << ',';
    write_label_fields(label_csv.out(), labels[i]);
    label_csv.out() << ',';
    if (branch_of[i] >= 0) label_csv.out() << branch_of[i];
    label_csv.out() << '\n';
  }

  FileWriter gap_csv(dir / "gaps.csv");
  gap_csv.out() << "index,lower,upper,width\n";
  for (std::size_t g = 0; g < gaps.intervals.size(); ++g)
    gap_csv.out() << g << ',' << format_real(gaps.intervals[g].lower) << ','
                  << format_real(gaps.intervals[g].upper) << ',' << format_real(gaps.intervals[g].width())
                  << '\n';

  FileWriter branch_csv(dir / "branches.csv");
  branch_csv.out() << "branch,gap,side,polarization,points,phase_start,phase_end,slope,decay_min,decay_max\n";
  for (std::size_t b = 0; b < branches.size(); ++b) {
    const Branch& br = branches[b];
    std::string slope;
    if (br.points.size() >= 3) {
      try {
        slope = format_real(branch_slope(br));
      } catch (const BranchDiscontinuity&) {
        slope = "";
      }
    }
    const auto [dmin, dmax] = decay_range_along_branch(br, gaps, th.band_edge_exclusion);
    branch_csv.out() << b << ',' << br.gap << ',' << to_string(br.side) << ',' << to_string(br.polarization)
                     << ',' << br.points.size() << ',' << format_real(br.points.front().phase) << ','
                     << format_real(br.points.back().phase) << ',' << slope << ',' << format_real(dmin) << ','
                     << format_real(dmax) << '\n';
  }

  return {spectrum.commit(), jsonl.commit(), label_csv.commit(), gap_csv.commit(), branch_csv.commit()};
}

OutputFiles run_modes(const RunManifest& m, double phase, double lo, double hi) {
  ChainConfig c = m.config;
  c.phase = phase;
  c = c.normalized();
  SpectrumSet single = open_chain_sweep(c, {c.phase}, mode_options(m.numerics), 1, m.numerics.tol_psd);
  EigenResult result;
  result.modes = std::move(single.modes);

  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < result.modes.size(); ++i) {
    const double d = result.modes[i].eigenvalue.detuning;
    if (d >= lo && d <= hi) selected.push_back(i);
  }
  if (selected.empty()) {
    std::vector<std::size_t> order(result.modes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const double mid = 0.5 * (lo + hi);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(result.modes[a].eigenvalue.detuning - mid) < std::abs(result.modes[b].eigenvalue.detuning - mid);
    });
    std::string nearest;
    for (std::size_t k = 0; k < std::min<std::size_t>(3, order.size()); ++k)
      nearest += fmt::format("{}{:.6g}", k ? ", " : "", result.modes[order[k]].eigenvalue.detuning);
    throw EmptySelection(fmt::format("no mode with detuning in [{}, {}]; nearest: {}", lo, hi, nearest));
  }

  const fs::path dir = prepare_dir(m);
  const GapSet gaps = chain_gaps(m);
  const Thresholds th = clamped(m.numerics.thresholds, c.n_atoms);

  FileWriter index(dir / "modes.csv");
  index.out() << "mode,phase,detuning,decay," << kLabelColumns << ",file\n";
  OutputFiles files;
  for (std::size_t i : selected) {
    const CollectiveMode& mode = result.modes[i];
    const std::string name = fmt::format("mode_{:04d}.csv", i);
    FileWriter profile(dir / name);
    write_profile_csv(intensity_profile(mode), profile.out());
    files.push_back(profile.commit());
    index.out() << i << ',' << format_real(c.phase) << ',' << format_real(mode.eigenvalue.detuning) << ','
                << format_real(mode.eigenvalue.decay) << ',';
    write_label_fields(index.out(), classify_mode(mode, gaps, th));
    index.out() << ',' << name << '\n';
  }
  files.insert(files.begin(), index.commit());
  return files;
}

OutputFiles run_greens_check(const RunManifest& m) {
  const fs::path dir = prepare_dir(m);
  const double spacing = m.config.spacing;

  FileWriter greens(dir / "greens.csv");
  greens.out() << "d,re_same,im_same,re_cross,im_cross\n";
  std::vector<double> ds = {1e-4, 1e-3, 1e-2};
  for (int l = 1; l <= 40; ++l) ds.push_back(l * spacing);
  for (double d : ds) {
    const PairCoupling j = pair_coupling(d);
    greens.out() << format_real(d) << ',' << format_real(j.j_same.real()) << ',' << format_real(j.j_same.imag())
                 << ',' << format_real(j.j_cross.real()) << ',' << format_real(j.j_cross.imag()) << '\n';
  }

  const int n_k = m.numerics.greens_k_points;
  struct Row {
    bool singular = false;
    BlochCoupling closed, truncated;
  };
  std::vector<Row> rows(static_cast<std::size_t>(n_k));
  std::vector<double> kappas(static_cast<std::size_t>(n_k));
  for (int i = 0; i < n_k; ++i) kappas[i] = -std::numbers::pi + kTwoPi * (i + 0.5) / n_k;

  LatticeSumOptions closed = lattice_options(m.numerics);
  LatticeSumOptions truncated = closed;
  truncated.method = SumMethod::Truncated;
  detail::parallel_for(rows.size(), m.numerics.threads, [&](std::size_t i) {
    if (near_light_line(kappas[i], spacing, closed.eps_light)) {
      rows[i].singular = true;
      return;
    }
    rows[i].closed = bloch_sum(kappas[i], spacing, closed);
    rows[i].truncated = bloch_sum(kappas[i], spacing, truncated);
  });

  FileWriter sums(dir / "blochsums.csv");
  sums.out() << "kappa,method,re_same,im_same,re_cross,im_cross,est_error,delta_same,delta_cross,status\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].singular) {
      sums.out() << format_real(kappas[i]) << ",,,,,,,,,light_line\n";
      continue;
    }
    const double ds_ = std::abs(rows[i].closed.f_same - rows[i].truncated.f_same);
    const double dc = std::abs(rows[i].closed.f_cross - rows[i].truncated.f_cross);
    for (const BlochCoupling* b : {&rows[i].closed, &rows[i].truncated})
      sums.out() << format_real(kappas[i]) << ',' << to_string(b->method) << ',' << format_real(b->f_same.real())
                 << ',' << format_real(b->f_same.imag()) << ',' << format_real(b->f_cross.real()) << ','
                 << format_real(b->f_cross.imag()) << ',' << format_real(b->est_error) << ','
                 << format_real(ds_) << ',' << format_real(dc) << ",ok\n";
  }
  return {greens.commit(), sums.commit()};
}

}  // namespace synthdim
