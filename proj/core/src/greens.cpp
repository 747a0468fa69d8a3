#include "synthdim/greens.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "synthdim/error.hpp"
#include "synthdim/polylog.hpp"

namespace synthdim {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI(0.0, 1.0);

// Radial factors of the two couplings without the e^{ix}: with y = 1/x,
// same = -(3/8)(y - i y^2 + y^3), cross = (3/8)(y + 3i y^2 - 3 y^3).
inline cplx same_factor(double y) { return -0.375 * cplx(y + y * y * y, -y * y); }
inline cplx cross_factor(double y) { return 0.375 * cplx(y - 3.0 * y * y * y, 3.0 * y * y); }

void check_light_line(double kappa, double spacing, double eps) {
  const double theta0 = kTwoPi * spacing;
  for (double theta : {theta0 + kappa, theta0 - kappa}) {
    const double dist = distance_to_zero_mod_two_pi(theta);
    if (dist < eps) throw LightLineSingular(theta, dist);
  }
}

// Geometric sequence z0 * z^m with an exact restart every few steps so that
// rounding does not accumulate over 10^7 terms.
class PhaseWalk {
 public:
  PhaseWalk(double phase0, double step) : phase0_(phase0), step_(step), step_factor_(std::polar(1.0, step)) {
    value_ = std::polar(1.0, phase0_);
  }
  cplx value() const { return value_; }
  void advance() {
    ++m_;
    if ((m_ & 63) == 0) {
      value_ = std::polar(1.0, std::fma(static_cast<double>(m_), step_, phase0_));
    } else {
      value_ *= step_factor_;
    }
  }

 private:
  double phase0_;
  double step_;
  cplx step_factor_;
  cplx value_;
  long m_ = 0;
};

// Direct sum over j = d + L q, j != 0, of J(|j| a) e^{i kappa L q}, averaged
// over the trailing half of the partial sums S_M (M counts L-pairs).
BlochCoupling truncated_residue_sum(int d, int q, double kappa, double spacing, long l_max) {
  const double theta0 = kTwoPi * spacing;
  const long m_max = std::max<long>(2, l_max / q);
  const long window = m_max / 2;

  // j = d + m q for m >= 0; phase e^{i theta0 j} e^{i kappa m q}.
  PhaseWalk pos(theta0 * d, (theta0 + kappa) * q);
  // |j| = (m + 1) q - d; phase e^{i theta0 |j|} e^{-i kappa (m + 1) q}.
  PhaseWalk neg((theta0 - kappa) * q - theta0 * d, (theta0 - kappa) * q);

  cplx same = 0.0, cross = 0.0;
  double magnitude = 0.0;
  for (long m = 0; m < m_max; ++m) {
    const double w =
        m < m_max - window ? 1.0 : static_cast<double>(m_max - m) / static_cast<double>(window);
    const long j_pos = d + m * q;
    if (j_pos != 0) {
      const double y = 1.0 / (theta0 * static_cast<double>(j_pos));
      const cplx u = w * pos.value();
      same += u * same_factor(y);
      cross += u * cross_factor(y);
      magnitude += w * y;
    }
    const long j_neg = (m + 1) * q - d;
    const double y = 1.0 / (theta0 * static_cast<double>(j_neg));
    const cplx u = w * neg.value();
    same += u * same_factor(y);
    cross += u * cross_factor(y);
    magnitude += w * y;
    pos.advance();
    neg.advance();
  }

  // Averaging leaves a tail of order 2 / (W M |1 - z|^2) per oscillating
  // 1/j series, z = e^{i (theta0 +- kappa) q}.
  const double j_max = static_cast<double>(m_max) * q;
  double envelope = 0.0;
  for (double phase : {(theta0 + kappa) * q, (theta0 - kappa) * q}) {
    const double gap = std::abs(1.0 - std::polar(1.0, phase));
    envelope += 2.0 / (static_cast<double>(window) * std::max(gap * gap, 1e-300));
  }
  const double est = 0.375 * 4.0 * envelope / (theta0 * j_max) +
                     64.0 * std::numeric_limits<double>::epsilon() * magnitude;
  return {same, cross, SumMethod::Truncated, est};
}

}  // namespace

const char* to_string(SumMethod m) { return m == SumMethod::ClosedForm ? "closed_form" : "truncated"; }

PairCoupling pair_coupling(double d) {
  if (!std::isfinite(d) || d <= 0.0)
    throw std::domain_error("pair separation must be finite and > 0");
  const double x = kTwoPi * d;
  const double y = 1.0 / x;
  const cplx phase = std::polar(1.0, x);
  return {phase * same_factor(y), phase * cross_factor(y)};
}

double distance_to_zero_mod_two_pi(double theta) { return std::abs(std::remainder(theta, kTwoPi)); }

bool near_light_line(double kappa, double spacing, double eps) {
  const double theta0 = kTwoPi * spacing;
  return distance_to_zero_mod_two_pi(theta0 + kappa) < eps ||
         distance_to_zero_mod_two_pi(theta0 - kappa) < eps;
}

BlochCoupling bloch_sum(double kappa, double spacing, const LatticeSumOptions& opts) {
  if (!std::isfinite(kappa)) throw std::domain_error("Bloch phase must be finite");
  if (!(spacing > 0.0)) throw std::domain_error("spacing must be > 0");
  check_light_line(kappa, spacing, opts.eps_light);
  if (opts.method == SumMethod::Truncated) return truncated_residue_sum(0, 1, kappa, spacing, opts.l_max);

  // sum_{l != 0} e^{i theta0 |l|} e^{i kappa l} / |l|^s = Li_s(e^{i(theta0+kappa)}) + Li_s(e^{i(theta0-kappa)})
  const double theta0 = kTwoPi * spacing;
  cplx sums[3];
  for (int s = 1; s <= 3; ++s)
    sums[s - 1] = polylog_unit_circle(s, theta0 + kappa) + polylog_unit_circle(s, theta0 - kappa);
  const double y = 1.0 / theta0;
  const cplx f_same = -0.375 * (sums[0] * y - kI * sums[1] * (y * y) + sums[2] * (y * y * y));
  const cplx f_cross = 0.375 * (sums[0] * y + 3.0 * kI * sums[1] * (y * y) - 3.0 * sums[2] * (y * y * y));
  const double est = 2e-14 * 0.375 * 2.0 * (y + 3.0 * y * y + 3.0 * y * y * y);
  return {f_same, f_cross, SumMethod::ClosedForm, est};
}

std::vector<BlochCoupling> supercell_couplings(int q, double kappa, double spacing,
                                               const LatticeSumOptions& opts) {
  if (q < 1) throw std::domain_error("supercell length must be >= 1");
  std::vector<BlochCoupling> out(static_cast<std::size_t>(q));
  if (opts.method == SumMethod::Truncated) {
    for (int d = 0; d < q; ++d) {
      BlochCoupling r = residue_class_sum(d, q, kappa, spacing, opts);
      const cplx gauge = std::polar(1.0, kappa * d);
      out[d] = {gauge * r.f_same, gauge * r.f_cross, r.method, r.est_error};
    }
    return out;
  }
  std::vector<BlochCoupling> shifted;
  shifted.reserve(static_cast<std::size_t>(q));
  double est = 0.0;
  for (int t = 0; t < q; ++t) {
    shifted.push_back(bloch_sum(kappa + kTwoPi * t / q, spacing, opts));
    est = std::max(est, shifted.back().est_error);
  }
  for (int d = 0; d < q; ++d) {
    cplx same = 0.0, cross = 0.0;
    for (int t = 0; t < q; ++t) {
      // Reduce t d mod q before forming the angle to keep it small.
      const cplx w = std::polar(1.0, -kTwoPi * static_cast<double>((static_cast<long>(t) * d) % q) / q);
      same += w * shifted[t].f_same;
      cross += w * shifted[t].f_cross;
    }
    out[d] = {same / static_cast<double>(q), cross / static_cast<double>(q), SumMethod::ClosedForm, est};
  }
  return out;
}

BlochCoupling residue_class_sum(int d, int q, double kappa, double spacing,
                                const LatticeSumOptions& opts) {
  if (q < 1 || d < 0 || d >= q) throw std::domain_error("residue class needs 0 <= d < q");
  if (!std::isfinite(kappa)) throw std::domain_error("Bloch phase must be finite");
  if (!(spacing > 0.0)) throw std::domain_error("spacing must be > 0");
  for (int t = 0; t < q; ++t) check_light_line(kappa + kTwoPi * t / q, spacing, opts.eps_light);
  if (opts.method == SumMethod::Truncated)
    return truncated_residue_sum(d, q, kappa, spacing, opts.l_max);

  // R(d) = e^{-i kappa d} T(d)
  cplx same = 0.0, cross = 0.0;
  double est = 0.0;
  for (int t = 0; t < q; ++t) {
    const BlochCoupling b = bloch_sum(kappa + kTwoPi * t / q, spacing, opts);
    const cplx w = std::polar(1.0, -kTwoPi * static_cast<double>((static_cast<long>(t) * d) % q) / q);
    same += w * b.f_same;
    cross += w * b.f_cross;
    est = std::max(est, b.est_error);
  }
  const cplx gauge = std::polar(1.0, -kappa * d) / static_cast<double>(q);
  return {gauge * same, gauge * cross, SumMethod::ClosedForm, est};
}

}  // namespace synthdim
