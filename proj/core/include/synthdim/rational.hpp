#pragma once

#include <compare>
#include <string>
#include <vector>

namespace synthdim {

/// Reduced fraction p/q with q >= 1.
struct Rational {
  long p = 0;
  long q = 1;

  Rational() = default;
  /// Reduces to lowest terms; throws ConfigError for q <= 0 or p < 0.
  Rational(long num, long den);

  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  std::string str() const;

  bool operator==(const Rational&) const = default;
};

/// All reduced fractions in [0, 1] with denominator <= order, ascending.
std::vector<Rational> farey_sequence(int order);

/// Last continued-fraction convergent of x with denominator <= q_max.
/// x must lie in [0, 1].
Rational best_rational(double x, long q_max);

/// Parses "p/q" or an integer.
Rational parse_rational(const std::string& text);

}  // namespace synthdim
