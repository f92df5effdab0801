#pragma once

// Sweep orchestration and artifact emission (CSV, SVG, manifest).

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "analytic.hpp"
#include "config.hpp"
#include "csim.hpp"
#include "format.hpp"
#include "qsim.hpp"
#include "result.hpp"

namespace qkr {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kCsvHeader = "kbar,phi_d,kicks,energy,method";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct PointEnergies {
  std::vector<double> energy;  // indexed by kick count, 0..max
  bool ok = true;
  std::string error;
};

inline int max_kick(const SweepConfig& cfg) { return *cfg.kicks.rbegin(); }

inline PointEnergies quantum_point(const SweepConfig& cfg, double phi_d, double kbar) {
  PointEnergies p;
  try {
    p.energy = run_ensemble(cfg.ensemble, ScaledParams(kbar, phi_d, max_kick(cfg)), cfg.spread,
                            RunOptions{cfg.threads})
                   .energy;
  } catch (const TruncationError& e) {
    p.ok = false;
    p.error = e.what();
  }
  return p;
}

inline PointEnergies classical_point(const SweepConfig& cfg, double phi_d, double kbar) {
  PointEnergies p;
  p.energy = run_classical(cfg.classical, ScaledParams(kbar, phi_d, max_kick(cfg)), cfg.threads).energy;
  return p;
}

inline void append_rows(SweepResult& out, const std::vector<double>& grid,
                        const std::vector<PointEnergies>& points, const SweepConfig& cfg, double phi_d,
                        const std::string& method) {
  for (int n : cfg.kicks)
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const auto& pt = points[g];
      if (!pt.ok) continue;
      const double e = pt.energy[static_cast<std::size_t>(n)] - (cfg.subtract_e0 ? pt.energy[0] : 0.0);
      out.rows.push_back({grid[g], phi_d, n, e, method});
    }
}

}  // namespace detail

/// Renders the manifest: resolved config, then run metadata under `manifest.`.
inline std::string build_manifest(const SweepConfig& cfg, double wall_seconds) {
  std::ostringstream os;
  os << "# qkr run manifest; replay with: qkr <subcommand> --config <this file>\n";
  os << cfg.to_text();
  os << "manifest.tool = qkr " << kToolVersion << "\n";
  os << "manifest.seed = " << cfg.seed << "\n";
  os << "manifest.calibration = " << format_double(kEnergyCalibration) << "\n";
  os << "manifest.energy_convention = " << (cfg.subtract_e0 ? "E - E0" : "E") << "\n";
  os << "manifest.spread_quadrature = "
     << (cfg.spread.rule == SpreadQuadrature::gauss_legendre ? "gauss_legendre" : "midpoint") << " "
     << cfg.spread.quadrature_points << " points, uniform half-width "
     << format_double(cfg.spread.relative_width) << "\n";
  os << "manifest.map_convention = kick then free evolution; energy recorded after each kick\n";
  os << "manifest.truncation_tolerance = " << format_double(kTruncationTolerance) << "\n";
  const bool random = (cfg.mode == Mode::classical) ||
                      ((cfg.mode == Mode::quantum || cfg.mode == Mode::compare) &&
                       cfg.ensemble.q_sampling == QSampling::random);
  os << "manifest.contract = "
     << (random ? "bit-identical for fixed seed" : "relative 1e-12 on replay") << "\n";
  os << "manifest.wall_time_s = " << format_double(wall_seconds) << "\n";
  return os.str();
}

/// Runs a validated sweep. Truncation failures are recorded per grid point.
inline SweepResult run_config(const SweepConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto grid = cfg.kbar_grid();
  SweepResult out;

  auto record_errors = [&](const std::vector<detail::PointEnergies>& pts, double phi_d) {
    for (std::size_t g = 0; g < grid.size(); ++g)
      if (!pts[g].ok) out.errors.push_back({grid[g], phi_d, pts[g].error});
  };

  auto analytic_points = [&](double phi_d, double e0) {
    std::vector<detail::PointEnergies> pts(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      pts[g].energy.assign(static_cast<std::size_t>(detail::max_kick(cfg)) + 1, e0);
      for (int n : cfg.kicks)
        pts[g].energy[static_cast<std::size_t>(n)] =
            energy_spread_averaged(n, phi_d, grid[g], e0, cfg.spread).value;
    }
    return pts;
  };

  switch (cfg.mode) {
    case Mode::analytic:
      for (double phi : cfg.phi_d) detail::append_rows(out, grid, analytic_points(phi, cfg.E0), cfg, phi, "analytic");
      break;
    case Mode::quantum:
      for (double phi : cfg.phi_d) {
        std::vector<detail::PointEnergies> pts;
        for (double kbar : grid) pts.push_back(detail::quantum_point(cfg, phi, kbar));
        record_errors(pts, phi);
        detail::append_rows(out, grid, pts, cfg, phi, "quantum");
      }
      break;
    case Mode::classical:
      for (double phi : cfg.phi_d) {
        std::vector<detail::PointEnergies> pts;
        for (double kbar : grid) pts.push_back(detail::classical_point(cfg, phi, kbar));
        detail::append_rows(out, grid, pts, cfg, phi, "classical");
      }
      break;
    case Mode::compare: {
      std::vector<SweepRow> analytic, quantum, gap_abs, gap_rel;
      for (double phi : cfg.phi_d) {
        std::vector<detail::PointEnergies> qpts;
        for (double kbar : grid) qpts.push_back(detail::quantum_point(cfg, phi, kbar));
        record_errors(qpts, phi);
        // Analytic curve shares the simulated initial energy so both are comparable.
        std::vector<detail::PointEnergies> apts(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g) {
          if (!qpts[g].ok) {
            apts[g].ok = false;
            continue;
          }
          const double e0 = qpts[g].energy[0];
          apts[g].energy.assign(qpts[g].energy.size(), e0);
          for (int n : cfg.kicks)
            apts[g].energy[static_cast<std::size_t>(n)] =
                energy_spread_averaged(n, phi, grid[g], e0, cfg.spread).value;
        }
        SweepResult a, q;
        detail::append_rows(a, grid, apts, cfg, phi, "analytic");
        detail::append_rows(q, grid, qpts, cfg, phi, "quantum");
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
          analytic.push_back(a.rows[i]);
          quantum.push_back(q.rows[i]);
          SweepRow d = a.rows[i];
          d.energy = std::abs(a.rows[i].energy - q.rows[i].energy);
          d.method = "gap_abs";
          gap_abs.push_back(d);
          d.energy = a.rows[i].energy != 0.0 ? d.energy / std::abs(a.rows[i].energy) : 0.0;
          d.method = "gap_rel";
          gap_rel.push_back(d);
        }
      }
      for (auto* block : {&analytic, &quantum, &gap_abs, &gap_rel})
        out.rows.insert(out.rows.end(), block->begin(), block->end());
      break;
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.manifest = build_manifest(cfg, wall);
  return out;
}

/// Config embedded in a manifest (metadata keys are ignored).
inline SweepConfig config_from_manifest(std::string_view manifest) { return parse_config(manifest); }

// ---------------------------------------------------------------------------
// CSV

inline void write_csv(const SweepResult& result, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& r : result.rows)
    os << format_double(r.kbar) << ',' << format_double(r.phi_d) << ',' << r.kicks << ','
       << format_double(r.energy) << ',' << r.method << '\n';
}

inline std::vector<SweepRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kCsvHeader)
    throw DomainError("csv: missing header `" + std::string(kCsvHeader) + "`");
  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = detail::split_list(line);
    SweepRow r;
    if (fields.size() != 5 || !parse_double(fields[0], r.kbar) || !parse_double(fields[1], r.phi_d) ||
        !parse_int(fields[2], r.kicks) || !parse_double(fields[3], r.energy) || fields[4].empty())
      throw DomainError("csv: malformed row at line " + std::to_string(line_no));
    r.method = std::string(fields[4]);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_csv(result, os);
  if (!os) throw IoError("write failed for " + path);
}

inline std::vector<SweepRow> parse_csv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_csv(is);
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

struct Series {
  std::string method;
  double phi_d;
  int kicks;
  std::vector<std::pair<double, double>> points;
};

inline std::vector<Series> group_series(const std::vector<SweepRow>& rows) {
  std::vector<Series> out;
  std::map<std::tuple<std::string, double, int>, std::size_t> index;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.method, r.phi_d, r.kicks);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, out.size()).first;
      out.push_back({r.method, r.phi_d, r.kicks, {}});
    }
    out[it->second].points.emplace_back(r.kbar, r.energy);
  }
  for (auto& s : out) std::stable_sort(s.points.begin(), s.points.end());
  return out;
}

inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (f * mag >= raw) {
      step = f * mag;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) ticks.push_back(t);
  return ticks;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

}  // namespace detail

/// Energy-vs-kbar figure, one polyline per (method, phi_d, kicks). Output
/// depends only on the rows.
inline std::string render_svg(const SweepResult& result, bool energy_difference = true) {
  if (result.rows.empty()) throw DomainError("svg: result has no rows");
  const auto series = detail::group_series(result.rows);
  double x0 = result.rows.front().kbar, x1 = x0, y0 = result.rows.front().energy, y1 = y0;
  for (const auto& r : result.rows) {
    x0 = std::min(x0, r.kbar);
    x1 = std::max(x1, r.kbar);
    y0 = std::min(y0, r.energy);
    y1 = std::max(y1, r.energy);
  }
  if (x1 == x0) {
    x0 -= 0.5;
    x1 += 0.5;
  }
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  constexpr double W = 800, H = 500, L = 80, R = 190, T = 30, B = 60;
  const double pw = W - L - R, ph = H - T - B;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return T + (y1 - y) / (y1 - y0) * ph; };
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  std::ostringstream os;
  using detail::tick_label;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : detail::nice_ticks(x0, x1)) {
    const std::string x = format_fixed(sx(t));
    os << "<line x1=\"" << x << "\" y1=\"" << T + ph << "\" x2=\"" << x << "\" y2=\"" << T + ph + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">" << tick_label(t)
       << "</text>\n";
  }
  for (double t : detail::nice_ticks(y0, y1)) {
    const std::string y = format_fixed(sy(t));
    os << "<line x1=\"" << L - 5 << "\" y1=\"" << y << "\" x2=\"" << L << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << L - 8 << "\" y=\"" << y << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
       << tick_label(t) << "</text>\n";
  }
  os << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 15
     << "\" text-anchor=\"middle\">kbar (effective Planck constant, 8 omega_r T)</text>\n";
  os << "<text transform=\"translate(20 " << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << (energy_difference ? "E - E0" : "E") << " (recoil-energy units)</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* colour = palette[i % std::size(palette)];
    const bool dashed = s.method != "analytic";
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\""
       << (dashed ? " stroke-dasharray=\"5 3\"" : "") << " points=\"";
    for (std::size_t k = 0; k < s.points.size(); ++k)
      os << (k ? " " : "") << format_fixed(sx(s.points[k].first)) << ',' << format_fixed(sy(s.points[k].second));
    os << "\"/>\n";
    if (s.points.size() == 1)
      os << "<circle cx=\"" << format_fixed(sx(s.points[0].first)) << "\" cy=\""
         << format_fixed(sy(s.points[0].second)) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
    const double ly = T + 10 + 18.0 * i;
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 35 << "\" y2=\"" << ly
       << "\" stroke=\"" << colour << "\" stroke-width=\"1.5\"" << (dashed ? " stroke-dasharray=\"5 3\"" : "")
       << "/>\n";
    os << "<text x=\"" << W - R + 40 << "\" y=\"" << ly << "\" dominant-baseline=\"middle\">" << s.method
       << " N=" << s.kicks << " phi_d=" << format_double(s.phi_d) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void emit_svg(const SweepResult& result, const std::string& path, bool energy_difference = true) {
  const std::string doc = render_svg(result, energy_difference);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << doc;
  if (!os) throw IoError("write failed for " + path);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  os << text;
  if (!os) throw IoError("write failed for " + path);
}

}  // namespace qkr
