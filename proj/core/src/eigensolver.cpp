#include "synthdim/eigensolver.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "synthdim/error.hpp"

extern "C" void zgeev_(const char* jobvl, const char* jobvr, const int* n, std::complex<double>* a,
                       const int* lda, std::complex<double>* w, std::complex<double>* vl, const int* ldvl,
                       std::complex<double>* vr, const int* ldvr, std::complex<double>* work,
                       const int* lwork, double* rwork, int* info);

namespace synthdim {
namespace {

struct RawEigen {
  CVector values;
  CMatrix vectors;  // columns, empty unless requested
};

// LAPACK zgeev: Hessenberg reduction plus shifted QR.
RawEigen lapack_eigen(const CMatrix& matrix, bool want_vectors) {
  const int n = static_cast<int>(matrix.rows());
  CMatrix a = matrix;
  RawEigen out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  const char jobvr = want_vectors ? 'V' : 'N';
  const int ldvr = want_vectors ? n : 1;
  cplx vr_dummy;
  cplx* vr = want_vectors ? out.vectors.data() : &vr_dummy;
  std::vector<double> rwork(2 * static_cast<std::size_t>(n));
  int info = 0;
  int lwork = -1;
  cplx query;
  zgeev_("N", &jobvr, &n, a.data(), &n, out.values.data(), nullptr, &n, vr, &ldvr, &query, &lwork,
         rwork.data(), &info);
  lwork = std::max(1, static_cast<int>(query.real()));
  std::vector<cplx> work(static_cast<std::size_t>(lwork));
  zgeev_("N", &jobvr, &n, a.data(), &n, out.values.data(), nullptr, &n, vr, &ldvr, work.data(), &lwork,
         rwork.data(), &info);
  if (info != 0)
    throw NumericalError(fmt::format("QR iteration did not converge ({}x{}, info {})", n, n, info));
  return out;
}

}  // namespace

double mode_residual(const CMatrix& matrix, const CVector& v, cplx energy) {
  const double scale = matrix.norm();
  const double r = (matrix * v - energy * v).norm();
  return scale > 0.0 ? r / scale : r;
}

EigenResult eigendecompose(const CMatrix& matrix, const EigenOptions& opts) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0)
    throw std::invalid_argument("eigendecompose needs a non-empty square matrix");
  if (!matrix.allFinite()) throw std::invalid_argument("matrix has non-finite entries");

  const RawEigen solver = lapack_eigen(matrix, opts.vectors);
  const Eigen::Index n = matrix.rows();
  const CVector& values = solver.values;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const ComplexEigenvalue ea = ComplexEigenvalue::from_energy(values[a]);
    const ComplexEigenvalue eb = ComplexEigenvalue::from_energy(values[b]);
    if (ea.detuning != eb.detuning) return ea.detuning < eb.detuning;
    return ea.decay < eb.decay;
  });

  EigenResult result;
  result.modes.reserve(order.size());
  for (Eigen::Index idx : order) {
    CollectiveMode mode;
    mode.eigenvalue = ComplexEigenvalue::from_energy(values[idx]);
    if (opts.vectors) {
      mode.amplitudes = solver.vectors.col(idx);
      normalize_mode(mode.amplitudes);
      mode.residual = mode_residual(matrix, mode.amplitudes, values[idx]);
      result.max_residual = std::max(result.max_residual, mode.residual);
    }
    result.modes.push_back(std::move(mode));
  }

  if (opts.vectors) {
    if (!(result.max_residual <= opts.tol_eig))
      throw NumericalError(fmt::format("eigenpair residual {:.3g} exceeds tolerance {:.3g}",
                                       result.max_residual, opts.tol_eig),
                           result.max_residual);
  } else {
    // Without vectors, fall back to the trace identity.
    const cplx trace = matrix.trace();
    const cplx sum = values.sum();
    const double scale = std::max(1.0, matrix.cwiseAbs().diagonal().sum());
    const double err = std::abs(sum - trace) / scale;
    result.max_residual = err;
    if (!(err <= std::max(opts.tol_eig, 1e-10)))
      throw NumericalError(fmt::format("trace identity violated by {:.3g}", err), err);
  }
  return result;
}

ResidualReport verify_residuals(const CMatrix& matrix, const EigenResult& result, double tol_eig) {
  ResidualReport report;
  report.residuals.reserve(result.modes.size());
  for (std::size_t i = 0; i < result.modes.size(); ++i) {
    const CollectiveMode& m = result.modes[i];
    if (m.amplitudes.size() != matrix.rows())
      throw std::invalid_argument("mode dimension does not match the matrix");
    const double r = mode_residual(matrix, m.amplitudes, m.eigenvalue.energy());
    report.residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
    if (!(r <= tol_eig)) report.flagged.push_back(i);
  }
  return report;
}

}  // namespace synthdim
