#include "synthdim/hamiltonian.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "synthdim/error.hpp"

namespace synthdim {
namespace {

void set_block(CMatrix& m, Eigen::Index n, Eigen::Index k, cplx same, cplx cross) {
  m(2 * n, 2 * k) = same;
  m(2 * n + 1, 2 * k + 1) = same;
  m(2 * n, 2 * k + 1) = cross;
  m(2 * n + 1, 2 * k) = cross;
}

}  // namespace

std::vector<double> zeeman_profile(const ChainConfig& config) {
  const ChainConfig c = config.normalized();
  std::vector<double> b(static_cast<std::size_t>(c.n_atoms));
  for (int n = 1; n <= c.n_atoms; ++n)
    b[n - 1] = c.zeeman_amp * std::cos(kTwoPi * c.flux * n + c.phase);
  return b;
}

FiniteHamiltonian build_finite(const ChainConfig& config) {
  const ChainConfig c = config.normalized();
  const Eigen::Index n_atoms = c.n_atoms;
  CMatrix m = CMatrix::Zero(2 * n_atoms, 2 * n_atoms);

  // Couplings depend only on |n - m|; evaluate each distance once.
  std::vector<PairCoupling> by_distance(static_cast<std::size_t>(n_atoms));
  for (Eigen::Index d = 1; d < n_atoms; ++d) by_distance[d] = pair_coupling(d * c.spacing);

  for (Eigen::Index n = 0; n < n_atoms; ++n)
    for (Eigen::Index k = 0; k < n_atoms; ++k)
      if (n != k) {
        const PairCoupling& j = by_distance[std::abs(n - k)];
        set_block(m, n, k, j.j_same, j.j_cross);
      }

  const std::vector<double> zeeman = zeeman_profile(c);
  for (Eigen::Index n = 0; n < n_atoms; ++n) {
    m(2 * n, 2 * n) = cplx(zeeman[n], -0.5);
    m(2 * n + 1, 2 * n + 1) = cplx(-zeeman[n], -0.5);
  }
  return {std::move(m), c};
}

BlochHamiltonian build_bloch(Rational flux, double kappa, double phase, double spacing,
                             double zeeman_amp, const LatticeSumOptions& opts) {
  return build_bloch(flux, kappa, phase, zeeman_amp,
                     supercell_couplings(static_cast<int>(flux.q), kappa, spacing, opts));
}

BlochHamiltonian build_bloch(Rational flux, double kappa, double phase, double zeeman_amp,
                             const std::vector<BlochCoupling>& t) {
  if (!(zeeman_amp >= 0.0)) throw ConfigError("zeeman_amp must be >= 0", "zeeman_amp");
  const double phi = reduce_phase(phase);
  const int q = static_cast<int>(flux.q);
  if (t.size() != static_cast<std::size_t>(q)) throw std::invalid_argument("need one coupling per residue class");

  CMatrix m = CMatrix::Zero(2 * q, 2 * q);
  for (int n = 0; n < q; ++n)
    for (int k = 0; k < q; ++k) {
      const BlochCoupling& c = t[static_cast<std::size_t>(((k - n) % q + q) % q)];
      set_block(m, n, k, c.f_same, c.f_cross);
    }
  for (int n = 0; n < q; ++n) {
    // Sites are numbered 1..q inside the supercell.
    const double b = zeeman_amp * std::cos(kTwoPi * static_cast<double>(flux.p * (n + 1) % q) / q + phi);
    m(2 * n, 2 * n) += cplx(b, -0.5);
    m(2 * n + 1, 2 * n + 1) += cplx(-b, -0.5);
  }
  return {std::move(m), flux, kappa, phi};
}

CMatrix decay_matrix(const CMatrix& m) {
  const cplx i(0.0, 1.0);
  return i * (m - m.adjoint());
}

double min_decay_eigenvalue(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(decay_matrix(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("decay-matrix eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

CMatrix swap_polarizations(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0)
    throw std::invalid_argument("polarization swap needs an even square matrix");
  Eigen::PermutationMatrix<Eigen::Dynamic> p(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) p.indices()[i] = static_cast<int>(i ^ 1);
  return p * m * p.transpose();
}

void write_matrix_csv(const CMatrix& m, std::ostream& out) {
  out << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      out << fmt::format("{},{},{:.17g},{:.17g}\n", r, c, m(r, c).real(), m(r, c).imag());
}

}  // namespace synthdim
