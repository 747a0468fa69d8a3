#pragma once

#include <cstddef>
#include <vector>

#include "synthdim/types.hpp"

namespace synthdim {

struct EigenOptions {
  double tol_eig = 1e-9;  // relative residual bound per mode
  /// When false only eigenvalues are computed; modes carry empty amplitude
  /// vectors and the trace identity replaces the per-mode residual check.
  bool vectors = true;
};

/// Modes sorted by detuning, then decay, then solver order.
struct EigenResult {
  std::vector<CollectiveMode> modes;
  double max_residual = 0.0;
};

/// Full dense eigendecomposition of a non-Hermitian matrix. Throws
/// NumericalError if the solver fails or any residual exceeds tol_eig.
EigenResult eigendecompose(const CMatrix& matrix, const EigenOptions& opts = {});

struct ResidualReport {
  std::vector<double> residuals;
  std::vector<std::size_t> flagged;  // indices above tol_eig
  double max_residual = 0.0;
};

ResidualReport verify_residuals(const CMatrix& matrix, const EigenResult& result,
                                double tol_eig = 1e-9);

/// ||H v - E v||_2 / ||H||_F.
double mode_residual(const CMatrix& matrix, const CVector& v, cplx energy);

}  // namespace synthdim
