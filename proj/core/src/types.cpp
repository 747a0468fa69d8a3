#include "synthdim/types.hpp"

#include <cmath>

#include "synthdim/error.hpp"

namespace synthdim {

double reduce_phase(double phi) {
  if (!std::isfinite(phi)) throw ConfigError("phase must be finite", "phase");
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod of a value just below zero can round back up to 2pi.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

void ChainConfig::validate() const {
  if (n_atoms < 1) throw ConfigError("n_atoms must be >= 1", "n_atoms");
  if (!std::isfinite(spacing) || spacing <= 0.0) throw ConfigError("spacing must be > 0", "spacing");
  if (!std::isfinite(zeeman_amp) || zeeman_amp < 0.0)
    throw ConfigError("zeeman_amp must be >= 0", "zeeman_amp");
  if (!std::isfinite(flux) || flux < 0.0 || flux > 1.0)
    throw ConfigError("flux must lie in [0, 1]", "flux");
  if (!std::isfinite(phase)) throw ConfigError("phase must be finite", "phase");
}

ChainConfig ChainConfig::normalized() const {
  validate();
  ChainConfig c = *this;
  c.phase = reduce_phase(phase);
  return c;
}

void normalize_mode(CVector& v) {
  const double norm = v.norm();
  if (norm == 0.0 || !std::isfinite(norm)) return;
  v /= norm;
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  const cplx rot = std::conj(v[best]) / best_abs;
  v *= rot;
  v[best] = cplx(best_abs, 0.0);
}

}  // namespace synthdim
