#pragma once

// Sweep configuration: line-oriented `key = value` text.
//
//   # comment                      blank lines and '#' comments are ignored
//   [ensemble]                     section header, prefixes following keys
//   n_q = 512                      -> ensemble.n_q
//   kbar.points = 256              dotted keys work anywhere
//
// Lists are comma separated. `kicks` also accepts ranges (`2-5`). The full
// key table is in README.md; every key round-trips through to_text().

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "analytic.hpp"
#include "csim.hpp"
#include "format.hpp"
#include "qsim.hpp"
#include "units.hpp"

namespace qkr {

/// Invalid configuration. `field` names the key, `constraint` what it violated.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, std::string constraint)
      : std::invalid_argument(field + ": " + constraint),
        field_(std::move(field)),
        constraint_(std::move(constraint)) {}
  const std::string& field() const noexcept { return field_; }
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string field_;
  std::string constraint_;
};

enum class Mode { analytic, quantum, classical, compare };

inline constexpr int kMaxSweepKicks = 80;

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::analytic: return "analytic";
    case Mode::quantum: return "quantum";
    case Mode::classical: return "classical";
    case Mode::compare: return "compare";
  }
  return "analytic";
}

/// Raw key/value pairs in file order of first appearance.
using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap parse_config_text(std::string_view text) {
  ConfigMap out;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where, "expected `key = value`");
    std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError(where, "empty key");
    if (!section.empty()) key = section + "." + key;
    if (out.contains(key)) throw ConfigError(key, "duplicate key");
    out[key] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

struct KbarGrid {
  std::optional<double> min;
  std::optional<double> max;
  int points = 256;
  std::vector<double> values;  // explicit list wins over min/max/points

  std::vector<double> resolve() const {
    if (!values.empty()) return values;
    if (!min || !max) return {};
    if (points == 1) return {*min};
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) g[i] = *min + (*max - *min) * i / (points - 1);
    g.back() = *max;
    return g;
  }
};

/// Optional laboratory inputs; when present they override phi_d and/or the kbar grid.
struct PhysicalInputs {
  std::optional<double> omega_r, rabi_eff, omega, delta, tau_p;
  std::vector<double> periods;  // seconds
};

struct SweepConfig {
  Mode mode = Mode::analytic;
  std::set<int> kicks{5};
  std::vector<double> phi_d{4.8};
  KbarGrid kbar;
  IntensitySpread spread = IntensitySpread::uniform(0.1, 51);
  EnsembleSpec ensemble;
  ClassicalEnsemble classical;
  PhysicalInputs physical;
  double E0 = 0.0;
  bool subtract_e0 = true;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out_csv, out_svg, out_manifest;

  std::vector<double> kbar_grid() const { return kbar.resolve(); }

  void validate() const;
  std::string to_text() const;
};

namespace detail {

inline std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto c = v.find(',', pos);
    out.push_back(trim(v.substr(pos, c == std::string_view::npos ? std::string_view::npos : c - pos)));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return out;
}

inline double expect_double(const std::string& key, std::string_view v) {
  double d;
  if (!parse_double(v, d) || !std::isfinite(d)) throw ConfigError(key, "expected a finite number, got `" + std::string(v) + "`");
  return d;
}

template <typename Int>
Int expect_int(const std::string& key, std::string_view v) {
  Int i;
  if (!parse_int(v, i)) throw ConfigError(key, "expected an integer, got `" + std::string(v) + "`");
  return i;
}

inline std::vector<double> expect_doubles(const std::string& key, std::string_view v) {
  std::vector<double> out;
  for (auto item : split_list(v)) out.push_back(expect_double(key, item));
  return out;
}

inline bool expect_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key, "expected true/false");
}

inline std::set<int> expect_kicks(const std::string& key, std::string_view v) {
  std::set<int> out;
  for (auto item : split_list(v)) {
    const auto dash = item.find('-', 1);
    if (dash != std::string_view::npos) {
      const int lo = expect_int<int>(key, trim(item.substr(0, dash)));
      const int hi = expect_int<int>(key, trim(item.substr(dash + 1)));
      if (hi < lo) throw ConfigError(key, "range upper bound below lower bound");
      for (int k = lo; k <= hi; ++k) out.insert(k);
    } else {
      out.insert(expect_int<int>(key, item));
    }
  }
  return out;
}

template <typename T>
std::string join(const T& items) {
  std::string s;
  for (const auto& x : items) {
    if (!s.empty()) s += ", ";
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(x)>>)
      s += format_double(x);
    else
      s += std::to_string(x);
  }
  return s;
}

}  // namespace detail

/// Applies one key to a config. Unknown keys are errors.
inline void apply_config_key(SweepConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail;
  const std::string_view v = value;
  if (key == "mode") {
    if (v == "analytic") cfg.mode = Mode::analytic;
    else if (v == "quantum") cfg.mode = Mode::quantum;
    else if (v == "classical") cfg.mode = Mode::classical;
    else if (v == "compare") cfg.mode = Mode::compare;
    else throw ConfigError(key, "expected analytic|quantum|classical|compare");
  } else if (key == "kicks") {
    cfg.kicks = expect_kicks(key, v);
  } else if (key == "phi_d") {
    cfg.phi_d = expect_doubles(key, v);
  } else if (key == "kbar.min") {
    cfg.kbar.min = expect_double(key, v);
  } else if (key == "kbar.max") {
    cfg.kbar.max = expect_double(key, v);
  } else if (key == "kbar.points") {
    cfg.kbar.points = expect_int<int>(key, v);
  } else if (key == "kbar.values") {
    cfg.kbar.values = expect_doubles(key, v);
  } else if (key == "spread.width") {
    cfg.spread.relative_width = expect_double(key, v);
  } else if (key == "spread.points") {
    cfg.spread.quadrature_points = expect_int<int>(key, v);
  } else if (key == "spread.distribution") {
    if (v != "uniform") throw ConfigError(key, "expected uniform");
  } else if (key == "spread.rule") {
    if (v == "gauss_legendre") cfg.spread.rule = SpreadQuadrature::gauss_legendre;
    else if (v == "midpoint") cfg.spread.rule = SpreadQuadrature::midpoint;
    else throw ConfigError(key, "expected gauss_legendre|midpoint");
  } else if (key == "ensemble.n_q") {
    cfg.ensemble.n_q = expect_int<int>(key, v);
  } else if (key == "ensemble.sampling") {
    if (v == "midpoint") cfg.ensemble.q_sampling = QSampling::midpoint_quadrature;
    else if (v == "random") cfg.ensemble.q_sampling = QSampling::random;
    else throw ConfigError(key, "expected midpoint|random");
  } else if (key == "ensemble.initial") {
    if (v == "cold") cfg.ensemble.initial = InitialDistribution::cold;
    else if (v == "discrete_gaussian") cfg.ensemble.initial = InitialDistribution::discrete_gaussian;
    else throw ConfigError(key, "expected cold|discrete_gaussian");
  } else if (key == "ensemble.sigma") {
    cfg.ensemble.sigma_s = expect_double(key, v);
  } else if (key == "ensemble.n_max") {
    cfg.ensemble.n_max = v == "auto" ? 0 : expect_int<int>(key, v);
  } else if (key == "classical.particles") {
    cfg.classical.particles = expect_int<std::size_t>(key, v);
  } else if (key == "classical.rho_init") {
    if (v == "zero") cfg.classical.rho_init = RhoDistribution::zero;
    else if (v == "gaussian") cfg.classical.rho_init = RhoDistribution::gaussian;
    else throw ConfigError(key, "expected zero|gaussian");
  } else if (key == "classical.rho_sigma") {
    cfg.classical.rho_sigma = expect_double(key, v);
  } else if (key == "E0") {
    cfg.E0 = expect_double(key, v);
  } else if (key == "subtract_e0") {
    cfg.subtract_e0 = expect_bool(key, v);
  } else if (key == "seed") {
    cfg.seed = expect_int<std::uint64_t>(key, v);
  } else if (key == "threads") {
    cfg.threads = expect_int<unsigned>(key, v);
  } else if (key == "output.csv") {
    cfg.out_csv = value;
  } else if (key == "output.svg") {
    cfg.out_svg = value;
  } else if (key == "output.manifest") {
    cfg.out_manifest = value;
  } else if (key == "physical.omega_r") {
    cfg.physical.omega_r = expect_double(key, v);
  } else if (key == "physical.rabi_eff") {
    cfg.physical.rabi_eff = expect_double(key, v);
  } else if (key == "physical.omega") {
    cfg.physical.omega = expect_double(key, v);
  } else if (key == "physical.delta") {
    cfg.physical.delta = expect_double(key, v);
  } else if (key == "physical.tau_p") {
    cfg.physical.tau_p = expect_double(key, v);
  } else if (key == "physical.periods") {
    cfg.physical.periods = expect_doubles(key, v);
  } else if (key.starts_with("manifest.")) {
    // run metadata; ignored on replay
  } else {
    throw ConfigError(key, "unknown key");
  }
}

/// Derives phi_d and the kbar grid from laboratory inputs when given, then
/// clears them so the resolved config is purely dimensionless.
inline void resolve_physical(SweepConfig& cfg) {
  const PhysicalInputs ph = cfg.physical;
  std::optional<double> rabi = ph.rabi_eff;
  if (ph.omega || ph.delta) {
    if (!ph.omega || !ph.delta) throw ConfigError("physical.omega", "omega and delta must be given together");
    if (*ph.delta == 0.0) throw ConfigError("physical.delta", "must be non-zero");
    const double derived = rabi_effective(*ph.omega, *ph.delta);
    if (rabi && std::abs(*rabi - derived) > 1e-12 * std::abs(derived))
      throw ConfigError("physical.rabi_eff", "must equal omega^2/(4 delta)");
    rabi = derived;
  }
  if (rabi || ph.tau_p) {
    if (!rabi || !ph.tau_p)
      throw ConfigError("physical.tau_p", "rabi_eff (or omega, delta) and tau_p must be given together");
    if (!(*rabi > 0.0)) throw ConfigError("physical.rabi_eff", "must be > 0");
    if (!(*ph.tau_p > 0.0)) throw ConfigError("physical.tau_p", "must be > 0");
    cfg.phi_d = {0.5 * *rabi * *ph.tau_p};
  }
  if (!ph.periods.empty()) {
    if (!ph.omega_r || !(*ph.omega_r > 0.0))
      throw ConfigError("physical.omega_r", "required (> 0) when physical.periods is set");
    cfg.kbar.values.clear();
    for (double T : ph.periods) {
      if (!(T > 0.0)) throw ConfigError("physical.periods", "periods must be > 0");
      if (ph.tau_p && !(*ph.tau_p < T)) throw ConfigError("physical.periods", "each period must exceed tau_p");
      cfg.kbar.values.push_back(8.0 * *ph.omega_r * T);
    }
  }
  cfg.physical = {};
}

inline void SweepConfig::validate() const {
  if (kicks.empty()) throw ConfigError("kicks", "must be non-empty");
  const int max_kicks = mode == Mode::analytic || mode == Mode::compare ? kMaxAnalyticKicks : kMaxSweepKicks;
  for (int k : kicks)
    if (k < 1 || k > max_kicks)
      throw ConfigError("kicks", "must lie in 1-" + std::to_string(max_kicks) + " for mode " +
                                     std::string(to_string(mode)));
  if (phi_d.empty()) throw ConfigError("phi_d", "must be non-empty");
  for (double p : phi_d)
    if (!(p >= 0.0)) throw ConfigError("phi_d", "values must be >= 0");
  if (mode == Mode::classical)
    for (double p : phi_d)
      if (!(p > 0.0)) throw ConfigError("phi_d", "classical mode needs phi_d > 0 for unit bookkeeping");
  if (kbar.values.empty()) {
    if (!kbar.min || !kbar.max) throw ConfigError("kbar", "need kbar.values or kbar.min and kbar.max");
    if (kbar.points < 1) throw ConfigError("kbar.points", "must be >= 1");
    if (kbar.points > 1 && !(*kbar.max > *kbar.min)) throw ConfigError("kbar.max", "must exceed kbar.min");
  }
  const auto grid = kbar_grid();
  if (grid.empty()) throw ConfigError("kbar", "grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw ConfigError("kbar", "values must be > 0");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("kbar", "grid must be strictly increasing");
  }
  if (!(spread.relative_width >= 0.0 && spread.relative_width < 1.0))
    throw ConfigError("spread.width", "must lie in [0, 1)");
  if (spread.quadrature_points < 1) throw ConfigError("spread.points", "must be >= 1");
  if (ensemble.n_q < 1) throw ConfigError("ensemble.n_q", "must be >= 1");
  if (!(ensemble.sigma_s >= 0.0)) throw ConfigError("ensemble.sigma", "must be >= 0");
  if (ensemble.n_max < 0) throw ConfigError("ensemble.n_max", "must be >= 0 (0 = auto)");
  if (classical.particles < 1) throw ConfigError("classical.particles", "must be >= 1");
  if (!(classical.rho_sigma >= 0.0)) throw ConfigError("classical.rho_sigma", "must be >= 0");
  if (!(E0 >= 0.0)) throw ConfigError("E0", "must be >= 0");
}

/// Canonical text form; parse_config(to_text()) reproduces the config.
inline std::string SweepConfig::to_text() const {
  using detail::join;
  std::ostringstream os;
  os << "mode = " << to_string(mode) << "\n";
  os << "kicks = " << join(kicks) << "\n";
  os << "phi_d = " << join(phi_d) << "\n";
  os << "kbar.values = " << join(kbar_grid()) << "\n";
  os << "spread.width = " << format_double(spread.relative_width) << "\n";
  os << "spread.points = " << spread.quadrature_points << "\n";
  os << "spread.distribution = uniform\n";
  os << "spread.rule = " << (spread.rule == SpreadQuadrature::gauss_legendre ? "gauss_legendre" : "midpoint") << "\n";
  os << "ensemble.n_q = " << ensemble.n_q << "\n";
  os << "ensemble.sampling = " << (ensemble.q_sampling == QSampling::midpoint_quadrature ? "midpoint" : "random") << "\n";
  os << "ensemble.initial = " << (ensemble.initial == InitialDistribution::cold ? "cold" : "discrete_gaussian") << "\n";
  os << "ensemble.sigma = " << format_double(ensemble.sigma_s) << "\n";
  os << "ensemble.n_max = " << ensemble.n_max << "\n";
  os << "classical.particles = " << classical.particles << "\n";
  os << "classical.rho_init = " << (classical.rho_init == RhoDistribution::zero ? "zero" : "gaussian") << "\n";
  os << "classical.rho_sigma = " << format_double(classical.rho_sigma) << "\n";
  os << "E0 = " << format_double(E0) << "\n";
  os << "subtract_e0 = " << (subtract_e0 ? "true" : "false") << "\n";
  os << "seed = " << seed << "\n";
  os << "threads = " << threads << "\n";
  if (!out_csv.empty()) os << "output.csv = " << out_csv << "\n";
  if (!out_svg.empty()) os << "output.svg = " << out_svg << "\n";
  if (!out_manifest.empty()) os << "output.manifest = " << out_manifest << "\n";
  return os.str();
}

/// Builds and validates a config from key/value pairs on top of `base`.
inline SweepConfig config_from_map(const ConfigMap& map, SweepConfig base = {}) {
  for (const auto& [k, v] : map) apply_config_key(base, k, v);
  resolve_physical(base);
  base.ensemble.seed = base.seed;
  base.classical.seed = base.seed;
  base.validate();
  return base;
}

inline SweepConfig parse_config(std::string_view text, SweepConfig base = {}) {
  return config_from_map(parse_config_text(text), std::move(base));
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace qkr
