#include "synthdim/rational.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string_view>
#include <system_error>

#include "synthdim/error.hpp"

namespace synthdim {

Rational::Rational(long num, long den) {
  if (den <= 0) throw ConfigError(fmt::format("denominator must be positive, got {}", den), "flux");
  if (num < 0) throw ConfigError(fmt::format("numerator must be >= 0, got {}", num), "flux");
  const long g = std::gcd(num, den);
  p = g == 0 ? 0 : num / g;
  q = g == 0 ? 1 : den / g;
}

std::string Rational::str() const { return fmt::format("{}/{}", p, q); }

std::vector<Rational> farey_sequence(int order) {
  if (order < 1) throw ConfigError("farey_order must be >= 1", "farey_order");
  // Standard next-term recurrence, starting from 0/1, 1/n.
  std::vector<Rational> seq;
  long a = 0, b = 1, c = 1, d = order;
  seq.emplace_back(0, 1);
  while (c <= order) {
    const long k = (order + b) / d;
    const long na = c, nb = d;
    c = k * c - a;
    d = k * d - b;
    a = na;
    b = nb;
    seq.emplace_back(a, b);
  }
  return seq;
}

Rational best_rational(double x, long q_max) {
  if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("flux must lie in [0, 1]", "flux");
  if (q_max < 1) throw ConfigError("q_max must be >= 1", "q_max");
  // Convergents h/k of the continued fraction of x.
  long h_prev = 1, h = static_cast<long>(std::floor(x));
  long k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64 && frac > 1e-15; ++iter) {
    const double inv = 1.0 / frac;
    const long a = static_cast<long>(std::floor(inv));
    const long k_next = a * k + k_prev;
    if (k_next > q_max) break;
    const long h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    frac = inv - static_cast<double>(a);
  }
  return Rational(h, k);
}

Rational parse_rational(const std::string& text) {
  const auto fail = [&] { return ConfigError(fmt::format("cannot parse rational '{}'", text), "flux"); };
  const auto parse_long = [&](std::string_view part) {
    while (!part.empty() && std::isspace(static_cast<unsigned char>(part.front()))) part.remove_prefix(1);
    while (!part.empty() && std::isspace(static_cast<unsigned char>(part.back()))) part.remove_suffix(1);
    long v = 0;
    const auto [end, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || ec != std::errc() || end != part.data() + part.size()) throw fail();
    return v;
  };
  const std::string_view view(text);
  const auto slash = view.find('/');
  if (slash == std::string_view::npos) return Rational(parse_long(view), 1);
  return Rational(parse_long(view.substr(0, slash)), parse_long(view.substr(slash + 1)));
}

}  // namespace synthdim
