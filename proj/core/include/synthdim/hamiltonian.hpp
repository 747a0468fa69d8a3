#pragma once

#include <iosfwd>
#include <vector>

#include "synthdim/greens.hpp"
#include "synthdim/rational.hpp"
#include "synthdim/types.hpp"

namespace synthdim {

/// Open chain of N atoms: dense 2N x 2N complex-symmetric matrix in the
/// interleaved (+,-) basis. Diagonal: +-B_n - i/2; off-diagonal blocks are
/// the pair couplings at separation |n - m| a.
struct FiniteHamiltonian {
  CMatrix matrix;
  ChainConfig config;
};

/// Magnetic supercell of q sites at rational flux p/q, written in the
/// periodic gauge: block (n, m) is T((m - n) mod q) with T from
/// supercell_couplings, so the matrix depends on sites only through their
/// separation. kappa is the Bloch phase per site, with q kappa in [-pi, pi].
struct BlochHamiltonian {
  CMatrix matrix;
  Rational flux;
  double kappa = 0.0;
  double phase = 0.0;
};

/// mu B_n = zeeman_amp cos(2 pi b n + phi) for n = 1..N.
std::vector<double> zeeman_profile(const ChainConfig& config);

FiniteHamiltonian build_finite(const ChainConfig& config);

BlochHamiltonian build_bloch(Rational flux, double kappa, double phase, double spacing,
                             double zeeman_amp, const LatticeSumOptions& opts = {});

/// Same, from couplings already returned by supercell_couplings(q, kappa, ...).
BlochHamiltonian build_bloch(Rational flux, double kappa, double phase, double zeeman_amp,
                             const std::vector<BlochCoupling>& couplings);

/// Gamma = i (M - M^dagger), Hermitian.
CMatrix decay_matrix(const CMatrix& m);

/// Smallest eigenvalue of the decay matrix.
double min_decay_eigenvalue(const CMatrix& m);

/// Swaps the + and - components on every site (P M P with P the swap).
CMatrix swap_polarizations(const CMatrix& m);

/// CSV dump "row,col,re,im" of every entry, 17 significant digits.
void write_matrix_csv(const CMatrix& m, std::ostream& out);

}  // namespace synthdim
