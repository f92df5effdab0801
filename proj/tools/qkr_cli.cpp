// qkr: kicked-rotor sweeps from the command line.
//
//   qkr analytic-sweep  --config configs/fig1.cfg --out-csv fig1.csv --out-svg fig1.svg
//   qkr quantum-sweep   --config cfg --nq 256 --threads 8
//   qkr classical-sweep --config cfg --particles 100000
//   qkr compare         --config cfg
//   qkr convert-units   --omega-r 2.4e4 --rabi-eff 3.5e7 --tau-p 3e-7 --period 2e-5
//
// Flag overrides are applied on top of the config file; `--set key=value`
// reaches any config key.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qkr/qkr.hpp"

namespace {

struct SweepFlags {
  std::string config;
  std::vector<std::string> sets;
  std::string kicks, phi_d, kbar_values;
  std::optional<double> kbar_min, kbar_max, spread_width, sigma, e0, rho_sigma;
  std::optional<int> kbar_points, spread_points, nq, n_max;
  std::optional<std::string> sampling, initial, rho_init;
  std::optional<std::size_t> particles;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool no_subtract = false;
  std::string out_csv, out_svg, out_manifest;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
  cmd->add_option("--config", f.config, "config file (key = value)");
  cmd->add_option("--set", f.sets, "override any config key: --set key=value");
  cmd->add_option("--kicks", f.kicks, "kick counts, e.g. 2-5 or 1,3,5");
  cmd->add_option("--phi-d", f.phi_d, "kick strengths, comma separated");
  cmd->add_option("--kbar-min", f.kbar_min);
  cmd->add_option("--kbar-max", f.kbar_max);
  cmd->add_option("--kbar-points", f.kbar_points);
  cmd->add_option("--kbar-values", f.kbar_values, "explicit kbar list");
  cmd->add_option("--spread-width", f.spread_width, "relative half-width of the phi_d spread");
  cmd->add_option("--spread-points", f.spread_points);
  cmd->add_option("--nq", f.nq, "quasimomentum samples");
  cmd->add_option("--sampling", f.sampling, "midpoint|random");
  cmd->add_option("--initial", f.initial, "cold|discrete_gaussian");
  cmd->add_option("--sigma", f.sigma, "initial momentum std (two-photon recoils)");
  cmd->add_option("--n-max", f.n_max, "ladder half-width (0 = auto)");
  cmd->add_option("--particles", f.particles, "classical particle count");
  cmd->add_option("--rho-init", f.rho_init, "zero|gaussian");
  cmd->add_option("--rho-sigma", f.rho_sigma);
  cmd->add_option("--e0", f.e0, "initial energy for analytic curves");
  cmd->add_flag("--no-subtract-e0", f.no_subtract, "report E instead of E - E0");
  cmd->add_option("--seed", f.seed);
  cmd->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  cmd->add_option("--out-csv", f.out_csv);
  cmd->add_option("--out-svg", f.out_svg);
  cmd->add_option("--out-manifest", f.out_manifest);
}

template <typename T>
void put(qkr::ConfigMap& m, const char* key, const std::optional<T>& v) {
  if (v) {
    if constexpr (std::is_floating_point_v<T>)
      m[key] = qkr::format_double(*v);
    else if constexpr (std::is_same_v<T, std::string>)
      m[key] = *v;
    else
      m[key] = std::to_string(*v);
  }
}

qkr::SweepConfig resolve(const SweepFlags& f, qkr::Mode mode) {
  qkr::ConfigMap m;
  if (!f.config.empty()) m = qkr::parse_config_text(qkr::read_text_file(f.config));
  m["mode"] = std::string(qkr::to_string(mode));
  if (!f.kicks.empty()) m["kicks"] = f.kicks;
  if (!f.phi_d.empty()) m["phi_d"] = f.phi_d;
  if (!f.kbar_values.empty()) m["kbar.values"] = f.kbar_values;
  if (f.kbar_min || f.kbar_max || f.kbar_points) m.erase("kbar.values");
  put(m, "kbar.min", f.kbar_min);
  put(m, "kbar.max", f.kbar_max);
  put(m, "kbar.points", f.kbar_points);
  put(m, "spread.width", f.spread_width);
  put(m, "spread.points", f.spread_points);
  put(m, "ensemble.n_q", f.nq);
  put(m, "ensemble.sampling", f.sampling);
  put(m, "ensemble.initial", f.initial);
  put(m, "ensemble.sigma", f.sigma);
  put(m, "ensemble.n_max", f.n_max);
  put(m, "classical.particles", f.particles);
  put(m, "classical.rho_init", f.rho_init);
  put(m, "classical.rho_sigma", f.rho_sigma);
  put(m, "E0", f.e0);
  put(m, "seed", f.seed);
  put(m, "threads", f.threads);
  if (f.no_subtract) m["subtract_e0"] = "false";
  if (!f.out_csv.empty()) m["output.csv"] = f.out_csv;
  if (!f.out_svg.empty()) m["output.svg"] = f.out_svg;
  if (!f.out_manifest.empty()) m["output.manifest"] = f.out_manifest;
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw qkr::ConfigError(s, "--set expects key=value");
    m[std::string(qkr::trim(s.substr(0, eq)))] = std::string(qkr::trim(s.substr(eq + 1)));
  }
  return qkr::config_from_map(m);
}

int run_sweep(const SweepFlags& f, qkr::Mode mode) {
  const qkr::SweepConfig cfg = resolve(f, mode);
  const qkr::SweepResult result = qkr::run_config(cfg);
  for (const auto& e : result.errors)
    std::cerr << "warning: kbar=" << qkr::format_double(e.kbar) << " phi_d=" << qkr::format_double(e.phi_d)
              << ": " << e.message << "\n";
  if (cfg.out_csv.empty()) {
    qkr::write_csv(result, std::cout);
  } else {
    qkr::emit_csv(result, cfg.out_csv);
  }
  if (!cfg.out_svg.empty()) qkr::emit_svg(result, cfg.out_svg, cfg.subtract_e0);
  if (!cfg.out_manifest.empty()) qkr::write_text_file(cfg.out_manifest, result.manifest);
  return result.errors.empty() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum kicked rotor: analytic five-kick energies, Floquet and standard-map sweeps"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    qkr::Mode mode;
  };
  const Sub subs[] = {
      {"analytic-sweep", "closed-form energies after 1-5 kicks", qkr::Mode::analytic},
      {"quantum-sweep", "Floquet evolution of quasimomentum ensembles", qkr::Mode::quantum},
      {"classical-sweep", "standard-map Monte Carlo", qkr::Mode::classical},
      {"compare", "analytic vs quantum, with absolute and relative gaps", qkr::Mode::compare},
  };
  std::vector<SweepFlags> flags(std::size(subs));
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    cmds.push_back(app.add_subcommand(subs[i].name, subs[i].help));
    add_sweep_flags(cmds.back(), flags[i]);
  }

  auto* conv = app.add_subcommand("convert-units", "laboratory <-> scaled parameters (rad/s, s)");
  std::optional<double> omega_r, rabi_eff, omega, delta, tau_p, period, kbar;
  int kicks = 1;
  conv->add_option("--omega-r", omega_r, "recoil frequency (rad/s)")->required();
  conv->add_option("--rabi-eff", rabi_eff, "effective Rabi frequency (rad/s)");
  conv->add_option("--omega", omega, "bare Rabi frequency (rad/s)");
  conv->add_option("--delta", delta, "detuning (rad/s)");
  conv->add_option("--tau-p", tau_p, "pulse length (s)");
  conv->add_option("--period", period, "kick period (s)");
  conv->add_option("--kbar", kbar, "target kbar: prints the kick period");
  conv->add_option("--kicks", kicks);

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < cmds.size(); ++i)
      if (cmds[i]->parsed()) return run_sweep(flags[i], subs[i].mode);

    if (conv->parsed()) {
      if (kbar) {
        std::cout << "period = " << qkr::format_double(qkr::period_for_kbar(*omega_r, *kbar)) << "\n";
        return 0;
      }
      if (!tau_p || !period) throw qkr::DomainError("convert-units needs --tau-p and --period (or --kbar)");
      qkr::PhysicalParams p;
      if (omega || delta) {
        if (!omega || !delta) throw qkr::DomainError("--omega and --delta must be given together");
        p = qkr::physical_from_rabi(*omega_r, *omega, *delta, *tau_p, *period);
      } else {
        if (!rabi_eff) throw qkr::DomainError("need --rabi-eff or --omega/--delta");
        p = {*omega_r, *rabi_eff, *tau_p, *period, {}, {}};
      }
      const auto s = qkr::scaled_from_physical(p, kicks);
      std::cout << "kbar = " << qkr::format_double(s.kbar()) << "\n"
                << "phi_d = " << qkr::format_double(s.phi_d()) << "\n"
                << "kappa = " << qkr::format_double(s.kappa()) << "\n"
                << "kicks = " << s.kicks() << "\n";
      return 0;
    }
  } catch (const qkr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
