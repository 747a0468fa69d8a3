#include "synthdim/config.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numbers>
#include <set>
#include <sstream>

#include "synthdim/error.hpp"

namespace synthdim {
namespace {

// Recursive-descent evaluator for config values.
class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : s_(text) {}

  double parse() {
    const double v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail();
    return v;
  }

 private:
  [[noreturn]] void fail() const { throw std::invalid_argument("cannot parse '" + s_ + "'"); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  double expr() {
    double v = term();
    for (;;) {
      if (eat('+')) v += term();
      else if (eat('-')) v -= term();
      else return v;
    }
  }

  double term() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }

  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return primary();
  }

  double primary() {
    skip_ws();
    if (eat('(')) {
      const double v = expr();
      if (!eat(')')) fail();
      return v;
    }
    if (s_.compare(pos_, 2, "pi") == 0) {
      pos_ += 2;
      return std::numbers::pi;
    }
    if (s_.compare(pos_, 4, "sqrt") == 0) {
      pos_ += 4;
      if (!eat('(')) fail();
      const double v = expr();
      if (!eat(')')) fail();
      return std::sqrt(v);
    }
    double v = 0.0;
    const char* begin = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(begin, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == begin) fail();
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long parse_integer(const std::string& key, const std::string& value, std::size_t line) {
  long v = 0;
  const std::string t = trim(value);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, value), key, line);
  return v;
}

double parse_value(const std::string& key, const std::string& value, std::size_t line) {
  try {
    return parse_real(value);
  } catch (const ConfigError&) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, value), key, line);
  }
}

std::string real(double x) { return fmt::format("{:.17g}", x); }

void require(bool ok, const std::string& key, std::size_t line, const char* what) {
  if (!ok) throw ConfigError(fmt::format("{}: {}", key, what), key, line);
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Butterfly: return "butterfly";
    case Command::SweepPhi: return "sweep-phi";
    case Command::Modes: return "modes";
    case Command::GreensCheck: return "greens-check";
  }
  return "?";
}

RunManifest default_manifest(Command command) {
  RunManifest m;
  m.command = command;
  m.config.n_atoms = 101;
  m.config.spacing = 0.1;
  m.config.zeeman_amp = 10.0;
  m.config.flux = std::sqrt(5.0) / 10.0;
  m.config.phase = 0.0;
  return m;
}

double parse_real(const std::string& text) {
  double v = 0.0;
  try {
    v = ExprParser(text).parse();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!std::isfinite(v)) throw ConfigError(fmt::format("'{}' is not finite", text));
  return v;
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys = {
      "n_atoms",       "spacing",        "zeeman_amp",     "flux",          "phase",
      "k_samples",     "phase_samples",  "phi_points",     "farey_order",   "q_max",
      "eps_light",     "l_max",          "tol_eig",        "tol_psd",       "min_gap_width",
      "greens_k_points", "threads",      "window",         "edge_threshold", "pol_threshold",
      "band_edge_tol", "band_edge_exclusion", "branch_jump_factor", "output_dir"};
  return keys;
}

void apply_setting(RunManifest& m, const std::string& key, const std::string& value, std::size_t line) {
  auto pos_int = [&](int& field) {
    const long v = parse_integer(key, value, line);
    require(v >= 1 && v <= 1'000'000'000, key, line, "must be a positive integer");
    field = static_cast<int>(v);
  };
  auto nonneg_real = [&](double& field) {
    const double v = parse_value(key, value, line);
    require(v >= 0.0, key, line, "must be >= 0");
    field = v;
  };
  auto pos_real = [&](double& field) {
    const double v = parse_value(key, value, line);
    require(v > 0.0, key, line, "must be > 0");
    field = v;
  };
  auto unit_real = [&](double& field) {
    const double v = parse_value(key, value, line);
    require(v >= 0.0 && v <= 1.0, key, line, "must lie in [0, 1]");
    field = v;
  };

  Numerics& n = m.numerics;
  Thresholds& th = n.thresholds;
  if (key == "n_atoms") pos_int(m.config.n_atoms);
  else if (key == "spacing") pos_real(m.config.spacing);
  else if (key == "zeeman_amp") nonneg_real(m.config.zeeman_amp);
  else if (key == "flux") unit_real(m.config.flux);
  else if (key == "phase") m.config.phase = reduce_phase(parse_value(key, value, line));
  else if (key == "k_samples") pos_int(n.k_samples);
  else if (key == "phase_samples") pos_int(n.phase_samples);
  else if (key == "phi_points") pos_int(n.phi_points);
  else if (key == "farey_order") pos_int(n.farey_order);
  else if (key == "q_max") {
    const long v = parse_integer(key, value, line);
    require(v >= 1, key, line, "must be >= 1");
    n.q_max = v;
  } else if (key == "eps_light") pos_real(n.eps_light);
  else if (key == "l_max") {
    const long v = parse_integer(key, value, line);
    require(v >= 2, key, line, "must be >= 2");
    n.l_max = v;
  } else if (key == "tol_eig") pos_real(n.tol_eig);
  else if (key == "tol_psd") pos_real(n.tol_psd);
  else if (key == "min_gap_width") nonneg_real(n.min_gap_width);
  else if (key == "greens_k_points") pos_int(n.greens_k_points);
  else if (key == "threads") {
    const long v = parse_integer(key, value, line);
    require(v >= 0 && v <= 4096, key, line, "must lie in [0, 4096]");
    n.threads = static_cast<int>(v);
  } else if (key == "window") {
    const long v = parse_integer(key, value, line);
    require(v >= 0, key, line, "must be >= 0");
    th.window = static_cast<int>(v);
  } else if (key == "edge_threshold") unit_real(th.edge);
  else if (key == "pol_threshold") unit_real(th.polarization);
  else if (key == "band_edge_tol") nonneg_real(th.band_edge_tol);
  else if (key == "band_edge_exclusion") nonneg_real(th.band_edge_exclusion);
  else if (key == "branch_jump_factor") pos_real(th.branch_jump_factor);
  else if (key == "output_dir") {
    require(!trim(value).empty(), key, line, "must not be empty");
    m.output_dir = trim(value);
  } else {
    throw ConfigError(fmt::format("unknown key '{}'", key), key, line);
  }
}

RunManifest parse_manifest(std::istream& in, RunManifest base) {
  std::set<std::string> seen;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("expected 'key = value', got '{}'", text), {}, line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key before '='", {}, line);
    if (!seen.insert(key).second) throw ConfigError(fmt::format("duplicate key '{}'", key), key, line);
    apply_setting(base, key, value, line);
  }
  try {
    base.config.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.detail(), e.key(), 0);
  }
  return base;
}

RunManifest load_manifest(const std::string& path, RunManifest base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path);
  try {
    return parse_manifest(in, std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(e.detail(), e.key(), e.line(), path);
  }
}

std::string serialize_manifest(const RunManifest& m) {
  const ChainConfig& c = m.config;
  const Numerics& n = m.numerics;
  const Thresholds& th = n.thresholds;
  std::ostringstream out;
  out << "# synthdim run manifest (" << to_string(m.command) << ")\n";
  out << "n_atoms = " << c.n_atoms << "\n";
  out << "spacing = " << real(c.spacing) << "\n";
  out << "zeeman_amp = " << real(c.zeeman_amp) << "\n";
  out << "flux = " << real(c.flux) << "\n";
  out << "phase = " << real(c.phase) << "\n";
  out << "k_samples = " << n.k_samples << "\n";
  out << "phase_samples = " << n.phase_samples << "\n";
  out << "phi_points = " << n.phi_points << "\n";
  out << "farey_order = " << n.farey_order << "\n";
  out << "q_max = " << n.q_max << "\n";
  out << "eps_light = " << real(n.eps_light) << "\n";
  out << "l_max = " << n.l_max << "\n";
  out << "tol_eig = " << real(n.tol_eig) << "\n";
  out << "tol_psd = " << real(n.tol_psd) << "\n";
  out << "min_gap_width = " << real(n.min_gap_width) << "\n";
  out << "greens_k_points = " << n.greens_k_points << "\n";
  out << "threads = " << n.threads << "\n";
  out << "window = " << th.window << "\n";
  out << "edge_threshold = " << real(th.edge) << "\n";
  out << "pol_threshold = " << real(th.polarization) << "\n";
  out << "band_edge_tol = " << real(th.band_edge_tol) << "\n";
  out << "band_edge_exclusion = " << real(th.band_edge_exclusion) << "\n";
  out << "branch_jump_factor = " << real(th.branch_jump_factor) << "\n";
  out << "output_dir = " << m.output_dir << "\n";
  return out.str();
}

std::string resolve_output_dir(const RunManifest& m) {
  if (const char* env = std::getenv("SYNTHDIM_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return m.output_dir;
}

LatticeSumOptions lattice_options(const Numerics& n) {
  LatticeSumOptions o;
  o.eps_light = n.eps_light;
  o.l_max = n.l_max;
  return o;
}

SweepOptions sweep_options(const Numerics& n) {
  SweepOptions o;
  o.k_samples = n.k_samples;
  o.phase_samples = n.phase_samples;
  o.lattice = lattice_options(n);
  o.eigen.tol_eig = n.tol_eig;
  o.eigen.vectors = false;
  o.threads = n.threads;
  o.tol_psd = n.tol_psd;
  return o;
}

}  // namespace synthdim
