#pragma once

#include "synthdim/types.hpp"

namespace synthdim {

/// Li_s(e^{i theta}) for s in {1, 2, 3}, accurate to ~1e-14 absolute.
///
/// Uses the expansion of Li_s(e^mu) about mu = 0 after reducing theta into
/// [-pi, pi]; the series has radius 2pi so at most ~64 terms are needed.
/// Throws std::domain_error for s outside {1,2,3} or for s = 1 at theta = 0
/// mod 2pi, where the logarithm diverges.
cplx polylog_unit_circle(int s, double theta);

}  // namespace synthdim
