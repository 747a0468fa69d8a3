#pragma once

// Shared domain types. All quantities are dimensionless: lengths in units of
// the transition wavelength, rates and energies in units of the single-atom
// decay rate, frequencies as detunings from the bare transition.

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace synthdim {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces a phase into [0, 2pi). Throws ConfigError on non-finite input.
double reduce_phase(double phi);

/// Physical parameters of one chain. `phase` is stored reduced mod 2pi; the
/// other fields are kept exactly as given.
struct ChainConfig {
  int n_atoms = 1;
  double spacing = 0.1;     // a / lambda
  double zeeman_amp = 0.0;  // mu B0 / gamma0
  double flux = 0.0;        // b, spatial frequency of the field modulation
  double phase = 0.0;       // phi

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Validated copy with the phase reduced into [0, 2pi).
  ChainConfig normalized() const;

  bool operator==(const ChainConfig&) const = default;
};

/// E = detuning - i decay / 2.
struct ComplexEigenvalue {
  double detuning = 0.0;
  double decay = 0.0;

  static ComplexEigenvalue from_energy(cplx energy) {
    return {energy.real(), -2.0 * energy.imag()};
  }
  cplx energy() const { return {detuning, -0.5 * decay}; }
};

/// One eigenmode. Amplitudes are interleaved per atom as
/// (C_{1,+}, C_{1,-}, C_{2,+}, C_{2,-}, ...), unit 2-norm, with the
/// largest-magnitude component real and positive.
struct CollectiveMode {
  ComplexEigenvalue eigenvalue;
  CVector amplitudes;
  double residual = 0.0;  // ||H v - E v||_2 / ||H||_F

  int n_atoms() const { return static_cast<int>(amplitudes.size() / 2); }
};

/// Rescales `v` to unit norm and rotates its global phase so that the first
/// component of maximal magnitude is real and positive.
void normalize_mode(CVector& v);

}  // namespace synthdim
