#pragma once

#include <vector>

#include "synthdim/types.hpp"

namespace synthdim {

/// Free-space coupling between two atoms on the chain axis, already scaled
/// by 3 pi gamma0 / k0 so that it is a rate in units of gamma0.
struct PairCoupling {
  cplx j_same;   // J_{++} = J_{--}
  cplx j_cross;  // J_{+-} = J_{-+}
};

/// Couplings at separation d > 0 (units of lambda). Separations are
/// unsigned: d <= 0 and non-finite d throw std::domain_error.
PairCoupling pair_coupling(double d);

enum class SumMethod { ClosedForm, Truncated };

const char* to_string(SumMethod m);

/// Lattice sum of the pair couplings with Bloch phases.
struct BlochCoupling {
  cplx f_same;
  cplx f_cross;
  SumMethod method = SumMethod::ClosedForm;
  double est_error = 0.0;
};

struct LatticeSumOptions {
  SumMethod method = SumMethod::ClosedForm;
  double eps_light = 1e-6;  // light-line exclusion half-width, in radians
  long l_max = 1'000'000;   // truncated path only
};

/// Distance of theta from the nearest multiple of 2pi.
double distance_to_zero_mod_two_pi(double theta);

/// True if kappa (phase per site) is within eps of a light line.
bool near_light_line(double kappa, double spacing, double eps);

/// Sum over l != 0 of J(|l| a) exp(i kappa l), with kappa the Bloch phase
/// per site (k a). Throws LightLineSingular when 2 pi a +- kappa is within
/// eps_light of a multiple of 2 pi.
BlochCoupling bloch_sum(double kappa, double spacing, const LatticeSumOptions& opts = {});

/// Sum over j = d + L q != 0 of J(|j| a) exp(i kappa L q): the coupling
/// from every site of residue class d onto the origin, phased by the
/// supercell Bloch momentum. kappa is again the phase per site.
BlochCoupling residue_class_sum(int d, int q, double kappa, double spacing,
                                const LatticeSumOptions& opts = {});

/// All q periodic-gauge couplings T(d) = exp(i kappa d) R(d), d = 0..q-1,
/// where R is residue_class_sum. Shares the q lattice sums between classes.
std::vector<BlochCoupling> supercell_couplings(int q, double kappa, double spacing,
                                               const LatticeSumOptions& opts = {});

}  // namespace synthdim
