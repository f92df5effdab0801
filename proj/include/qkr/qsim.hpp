#pragma once

// Floquet evolution of quasimomentum ensembles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "ladder.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "units.hpp"

namespace qkr {

enum class QSampling { midpoint_quadrature, random };
enum class InitialDistribution { cold, discrete_gaussian };

struct EnsembleSpec {
  int n_q = 512;
  QSampling q_sampling = QSampling::midpoint_quadrature;
  InitialDistribution initial = InitialDistribution::cold;
  double sigma_s = 0.0;  // momentum std in two-photon recoils (discrete_gaussian)
  std::uint64_t seed = 0;
  int n_max = 0;  // 0 selects default_n_max

  void validate() const {
    if (n_q < 1) throw DomainError("ensemble.n_q must be >= 1");
    if (!(sigma_s >= 0.0) || !std::isfinite(sigma_s))
      throw DomainError("ensemble.sigma must be finite and >= 0");
    if (n_max < 0) throw DomainError("ensemble.n_max must be >= 0 (0 = auto)");
  }
};

struct EnergySeries {
  std::vector<double> energy;     // E(0..N)
  std::vector<double> std_error;  // Monte Carlo standard error of E(k) - E(0); empty if exact
  ScaledParams params;
  EnsembleSpec ensemble;
  IntensitySpread spread;
};

/// Ladder half-width large enough for N kicks at phi_d, counted from the
/// initial site n0.
inline int default_n_max(int kicks, double phi_d, long n0 = 0) {
  const double spread = kicks * (phi_d + 8.0 * std::max(1.0, std::cbrt(phi_d)));
  return static_cast<int>(std::ceil(spread + static_cast<double>(std::abs(n0)))) + 16;
}

struct RunOptions {
  unsigned threads = 1;
};

namespace detail {

inline std::vector<double> evolve(LadderState s, const KickOperator& kick, double kbar, int kicks) {
  std::vector<double> energies;
  energies.reserve(static_cast<std::size_t>(kicks) + 1);
  energies.push_back(energy_of_state(s));
  std::vector<Complex> scratch;
  for (int k = 0; k < kicks; ++k) {
    kick.apply(s, scratch);
    energies.push_back(energy_of_state(s));
    apply_free_inplace(s, kbar);
  }
  return energies;
}

}  // namespace detail

/// Kick, record, free-evolve; N times. E(0) is the initial energy.
inline EnergySeries run_trajectory(const LadderState& initial, const ScaledParams& params) {
  EnergySeries out;
  out.params = params;
  out.energy =
      detail::evolve(initial, KickOperator(params.phi_d()), params.kbar(), params.kicks());
  return out;
}

/// One member of an incoherent ensemble.
struct EnsembleMember {
  double phi_d = 0.0;
  double q = 0.0;
  long n0 = 0;
  double weight = 0.0;
};

inline std::vector<double> quasimomenta(const EnsembleSpec& spec) {
  std::vector<double> q(static_cast<std::size_t>(spec.n_q));
  for (int i = 0; i < spec.n_q; ++i) {
    if (spec.q_sampling == QSampling::midpoint_quadrature) {
      q[i] = (i + 0.5) / spec.n_q;
    } else {
      q[i] = SplitMix64::stream(spec.seed, static_cast<std::uint64_t>(i)).uniform();
    }
  }
  return q;
}

/// Members in a fixed order (spread sample, quasimomentum, n0); weights sum to 1.
inline std::vector<EnsembleMember> ensemble_members(const EnsembleSpec& spec, double phi_d,
                                                    const IntensitySpread& spread) {
  spec.validate();
  const auto phis = spread.samples(phi_d);
  const auto qs = quasimomenta(spec);
  std::vector<EnsembleMember> members;
  const bool gaussian = spec.initial == InitialDistribution::discrete_gaussian && spec.sigma_s > 0.0;
  const long reach = gaussian ? static_cast<long>(std::ceil(6.0 * spec.sigma_s)) + 1 : 0;
  for (const auto& [phi, w_phi] : phis) {
    std::vector<EnsembleMember> block;
    double block_total = 0.0;
    for (double q : qs) {
      for (long n0 = -reach; n0 <= reach; ++n0) {
        double w = 1.0;
        if (gaussian) {
          const double p = static_cast<double>(n0) + q;
          w = std::exp(-0.5 * p * p / (spec.sigma_s * spec.sigma_s));
        }
        block.push_back({phi, q, n0, w});
        block_total += w;
      }
    }
    for (auto& m : block) {
      m.weight *= w_phi / block_total;
      members.push_back(m);
    }
  }
  return members;
}

/// Weighted average of trajectory energies over the ensemble. The reduction
/// runs in member order, so the result is identical for any thread count.
inline EnergySeries run_ensemble(const EnsembleSpec& spec, const ScaledParams& params,
                                 const IntensitySpread& spread, RunOptions options = {}) {
  const auto members = ensemble_members(spec, params.phi_d(), spread);
  double phi_max = params.phi_d();
  for (const auto& m : members) phi_max = std::max(phi_max, m.phi_d);
  const int n_max = spec.n_max > 0 ? spec.n_max : default_n_max(params.kicks(), phi_max);

  // One kick operator per distinct phi_d, in spread order.
  std::vector<KickOperator> kicks;
  std::vector<std::size_t> kick_of_member(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (kicks.empty() || kicks.back().phi_d() != members[i].phi_d) kicks.emplace_back(members[i].phi_d);
    kick_of_member[i] = kicks.size() - 1;
  }

  std::vector<std::vector<double>> series(members.size());
  parallel_for(members.size(), options.threads, [&](std::size_t i) {
    const auto& m = members[i];
    series[i] = detail::evolve(plane_wave_centred(m.n0, m.q, n_max), kicks[kick_of_member[i]],
                               params.kbar(), params.kicks());
  });

  EnergySeries out;
  out.params = params;
  out.ensemble = spec;
  out.spread = spread;
  out.energy.assign(static_cast<std::size_t>(params.kicks()) + 1, 0.0);
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t k = 0; k < out.energy.size(); ++k) out.energy[k] += members[i].weight * series[i][k];
  return out;
}

}  // namespace qkr
