#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "synthdim/error.hpp"
#include "synthdim/greens.hpp"

using namespace synthdim;
using std::numbers::pi;

namespace {

const cplx I(0.0, 1.0);

// Circular-basis couplings written out exactly as the free-space result,
// with k0 = 2 pi / lambda = 2 pi and the 3 pi gamma0 / k0 prefactor.
PairCoupling transcribed(double r) {
  const double k0 = 2.0 * pi;
  const cplx e = std::exp(I * k0 * r);
  const double den = 8.0 * pi * k0 * k0 * r * r * r;
  const cplx g_same = -e / den * (k0 * k0 * r * r - I * k0 * r + 1.0);
  const cplx g_cross = e / den * (k0 * k0 * r * r + 3.0 * I * k0 * r - 3.0);
  const double pref = 3.0 * pi / k0;
  return {pref * g_same, pref * g_cross};
}

// Same couplings from the Cartesian dyadic for separation along y,
// G = e^{ikr}/(4 pi k^2 r^3) [(k^2r^2 + ikr - 1) 1 + (3 - 3ikr - k^2r^2) yy],
// whose circular components are -(Gxx + Gyy)/2 and -(Gyy - Gxx)/2 in the
// sign convention of the effective Hamiltonian.
PairCoupling cartesian(double r) {
  const double k = 2.0 * pi;
  const cplx pre = std::exp(I * k * r) / (4.0 * pi * k * k * r * r * r);
  const cplx gxx = pre * (k * k * r * r + I * k * r - 1.0);
  const cplx gyy = gxx + pre * (3.0 - 3.0 * I * k * r - k * k * r * r);
  const double pref = 3.0 * pi / k;
  return {-pref * (gxx + gyy) / 2.0, -pref * (gyy - gxx) / 2.0};
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Plain partial sum over 0 < |l| <= L with the tail averaged over the last
// half, independent of the library's truncated path.
BlochCoupling brute_bloch(double kappa, double a, long L) {
  cplx s_same = 0.0, s_cross = 0.0, avg_same = 0.0, avg_cross = 0.0;
  long count = 0;
  for (long l = 1; l <= L; ++l) {
    const PairCoupling j = pair_coupling(l * a);
    const double c = 2.0 * std::cos(kappa * l);
    s_same += c * j.j_same;
    s_cross += c * j.j_cross;
    if (l > L / 2) {
      avg_same += s_same;
      avg_cross += s_cross;
      ++count;
    }
  }
  return {avg_same / static_cast<double>(count), avg_cross / static_cast<double>(count)};
}

}  // namespace

TEST_CASE("pair_coupling matches two independent transcriptions") {
  for (double d : {1e-3, 0.01, 0.05, 0.1, 0.237, 0.5, 1.0, 3.3, 17.0, 250.0}) {
    CAPTURE(d);
    const PairCoupling j = pair_coupling(d);
    const PairCoupling t = transcribed(d);
    const PairCoupling c = cartesian(d);
    CHECK(rel(j.j_same, t.j_same) < 1e-13);
    CHECK(rel(j.j_cross, t.j_cross) < 1e-13);
    CHECK(rel(j.j_same, c.j_same) < 1e-12);
    CHECK(rel(j.j_cross, c.j_cross) < 1e-12);
  }
}

TEST_CASE("near-field limit of the dissipative part") {
  // Two coincident atoms: Im j_same -> -1/2, Im j_cross -> 0.
  for (double d : {1e-4, 1e-3}) {
    const PairCoupling j = pair_coupling(d);
    CHECK(j.j_same.imag() == doctest::Approx(-0.5).epsilon(1e-4));
    CHECK(std::abs(j.j_cross.imag()) < 1e-5);
  }
}

TEST_CASE("pair_coupling rejects non-positive and non-finite separations") {
  CHECK_THROWS_AS(pair_coupling(0.0), std::domain_error);
  CHECK_THROWS_AS(pair_coupling(-0.1), std::domain_error);
  CHECK_THROWS_AS(pair_coupling(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(pair_coupling(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("light-line detection") {
  const double a = 0.1;
  const double theta0 = 2.0 * pi * a;
  CHECK(near_light_line(theta0, a, 1e-6));
  CHECK(near_light_line(-theta0 + 1e-8, a, 1e-6));
  CHECK(near_light_line(theta0 + 2.0 * pi, a, 1e-6));
  CHECK_FALSE(near_light_line(theta0 + 1e-4, a, 1e-6));
  CHECK_FALSE(near_light_line(0.0, a, 1e-6));
  CHECK(distance_to_zero_mod_two_pi(2.0 * pi - 0.25) == doctest::Approx(0.25));

  for (SumMethod m : {SumMethod::ClosedForm, SumMethod::Truncated}) {
    LatticeSumOptions opts;
    opts.method = m;
    opts.l_max = 1000;
    CHECK_THROWS_AS(bloch_sum(theta0, a, opts), LightLineSingular);
    CHECK_THROWS_AS(bloch_sum(-theta0 + 5e-7, a, opts), LightLineSingular);
    CHECK_THROWS_AS(residue_class_sum(0, 5, theta0, a, opts), LightLineSingular);
  }
}

TEST_CASE("closed-form Bloch sums against truncated and brute-force sums") {
  const double a = 0.1;
  LatticeSumOptions closed;
  LatticeSumOptions truncated;
  truncated.method = SumMethod::Truncated;
  truncated.l_max = 1'000'000;
  for (double kappa : {-2.9, -1.0, -0.4, 0.0, 0.3, 0.75, 1.9, 3.1}) {
    CAPTURE(kappa);
    const BlochCoupling c = bloch_sum(kappa, a, closed);
    const BlochCoupling t = bloch_sum(kappa, a, truncated);
    CHECK(c.method == SumMethod::ClosedForm);
    CHECK(t.method == SumMethod::Truncated);
    CHECK(std::abs(c.f_same - t.f_same) < 1e-8);
    CHECK(std::abs(c.f_cross - t.f_cross) < 1e-8);
    CHECK(t.est_error > 0.0);
    const BlochCoupling b = brute_bloch(kappa, a, 200'000);
    CHECK(std::abs(c.f_same - b.f_same) < 1e-6);
    CHECK(std::abs(c.f_cross - b.f_cross) < 1e-6);
  }
}

TEST_CASE("Bloch sums are even in kappa and 2 pi periodic") {
  for (double kappa : {0.2, 1.4, 2.7}) {
    const BlochCoupling p = bloch_sum(kappa, 0.15);
    const BlochCoupling m = bloch_sum(-kappa, 0.15);
    const BlochCoupling w = bloch_sum(kappa + 2.0 * pi, 0.15);
    CHECK(std::abs(p.f_same - m.f_same) < 1e-13);
    CHECK(std::abs(p.f_cross - m.f_cross) < 1e-13);
    CHECK(std::abs(p.f_same - w.f_same) < 1e-12);
  }
}

TEST_CASE("Inside the light cone the Bloch sum is purely dispersive") {
  // For |kappa| > 2 pi a (guided modes) no lattice mode radiates, so the
  // collective decay -2 Im(f) cancels the single-atom rate exactly.
  const double a = 0.1;
  for (double kappa : {1.0, 2.0, 3.0}) {
    const BlochCoupling f = bloch_sum(kappa, a);
    CHECK(std::abs(f.f_same.imag() + f.f_cross.imag() - 0.5) < 1e-12);
    CHECK(std::abs(f.f_same.imag() - f.f_cross.imag() - 0.5) < 1e-12);
  }
}

TEST_CASE("residue classes decompose the full Bloch sum") {
  const double a = 0.1;
  const double kappa = 0.37;
  for (int q : {1, 2, 5}) {
    CAPTURE(q);
    const auto t = supercell_couplings(q, kappa, a);
    REQUIRE(t.size() == static_cast<std::size_t>(q));
    cplx same = 0.0, cross = 0.0;
    for (int d = 0; d < q; ++d) {
      same += t[d].f_same;
      cross += t[d].f_cross;
      const BlochCoupling r = residue_class_sum(d, q, kappa, a);
      const cplx gauge = std::polar(1.0, kappa * d);
      CHECK(std::abs(gauge * r.f_same - t[d].f_same) < 1e-12);
      CHECK(std::abs(gauge * r.f_cross - t[d].f_cross) < 1e-12);
    }
    const BlochCoupling full = bloch_sum(kappa, a);
    CHECK(std::abs(same - full.f_same) < 1e-12);
    CHECK(std::abs(cross - full.f_cross) < 1e-12);
  }
}

TEST_CASE("truncated residue-class sums agree with the closed form") {
  LatticeSumOptions truncated;
  truncated.method = SumMethod::Truncated;
  truncated.l_max = 1'000'000;
  const double a = 0.1;
  for (int q : {2, 3, 5}) {
    for (double kappa : {-0.5, 0.11}) {
      const auto c = supercell_couplings(q, kappa, a);
      const auto t = supercell_couplings(q, kappa, a, truncated);
      for (int d = 0; d < q; ++d) {
        CAPTURE(q);
        CAPTURE(d);
        CHECK(std::abs(c[d].f_same - t[d].f_same) < 1e-8);
        CHECK(std::abs(c[d].f_cross - t[d].f_cross) < 1e-8);
      }
    }
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(residue_class_sum(5, 5, 0.1, 0.1), std::domain_error);
  CHECK_THROWS_AS(residue_class_sum(-1, 5, 0.1, 0.1), std::domain_error);
  CHECK_THROWS_AS(supercell_couplings(0, 0.1, 0.1), std::domain_error);
  CHECK_THROWS_AS(bloch_sum(0.1, 0.0), std::domain_error);
  CHECK(std::string(to_string(SumMethod::ClosedForm)) != to_string(SumMethod::Truncated));
}
