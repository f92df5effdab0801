#pragma once

// Chirikov standard map, the kbar -> 0 limit of the kicked rotor.
//
//   rho' = rho + kappa sin(phi)
//   phi' = (phi + rho') mod 2 pi
//
// Energies use the quantum calibration E = 2 (rho / kbar)^2, so a single
// kick from rho = 0 adds phi_d^2 on average.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "parallel.hpp"
#include "qsim.hpp"
#include "rng.hpp"
#include "units.hpp"

namespace qkr {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ClassicalParticle {
  double phi = 0.0;
  double rho = 0.0;
};

enum class RhoDistribution { zero, gaussian };

struct ClassicalEnsemble {
  std::size_t particles = 100000;
  RhoDistribution rho_init = RhoDistribution::zero;
  double rho_sigma = 0.0;  // scaled-momentum std for RhoDistribution::gaussian
  std::uint64_t seed = 0;

  void validate() const {
    if (particles < 1) throw DomainError("classical.particles must be >= 1");
    if (!(rho_sigma >= 0.0) || !std::isfinite(rho_sigma))
      throw DomainError("classical.rho_sigma must be finite and >= 0");
  }
};

inline double wrap_angle(double phi) noexcept {
  double r = phi - kTwoPi * std::floor(phi / kTwoPi);
  if (r >= kTwoPi || r < 0.0) r = 0.0;
  return r;
}

inline ClassicalParticle standard_map_step(ClassicalParticle p, double kappa) noexcept {
  p.rho += kappa * std::sin(p.phi);
  p.phi = wrap_angle(p.phi + p.rho);
  return p;
}

/// Initial state of particle `index`: its own stream, phase first.
inline ClassicalParticle initial_particle(const ClassicalEnsemble& ens, std::size_t index) {
  SplitMix64 rng = SplitMix64::stream(ens.seed, index);
  ClassicalParticle p;
  p.phi = kTwoPi * rng.uniform();
  if (ens.rho_init == RhoDistribution::gaussian) p.rho = ens.rho_sigma * rng.normal();
  return p;
}

/// rho of every particle after each kick: history[k][i], k = 0..kicks.
inline std::vector<std::vector<double>> classical_rho_history(const ClassicalEnsemble& ens,
                                                              double kappa, int kicks,
                                                              unsigned threads = 1) {
  ens.validate();
  if (kicks < 1) throw DomainError("kicks must be >= 1");
  std::vector<std::vector<double>> history(static_cast<std::size_t>(kicks) + 1,
                                           std::vector<double>(ens.particles));
  constexpr std::size_t chunk = 4096;
  const std::size_t chunks = (ens.particles + chunk - 1) / chunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t end = std::min(ens.particles, (c + 1) * chunk);
    for (std::size_t i = c * chunk; i < end; ++i) {
      ClassicalParticle p = initial_particle(ens, i);
      history[0][i] = p.rho;
      for (int k = 1; k <= kicks; ++k) {
        p = standard_map_step(p, kappa);
        history[static_cast<std::size_t>(k)][i] = p.rho;
      }
    }
  });
  return history;
}

/// Mean calibrated energy per kick, with the standard error of E(k) - E(0).
inline EnergySeries run_classical(const ClassicalEnsemble& ens, const ScaledParams& params,
                                  unsigned threads = 1) {
  const auto history = classical_rho_history(ens, params.kappa(), params.kicks(), threads);
  const double scale = kEnergyCalibration / (params.kbar() * params.kbar());
  const double count = static_cast<double>(ens.particles);
  EnergySeries out;
  out.params = params;
  for (std::size_t k = 0; k < history.size(); ++k) {
    double sum = 0.0, diff_sum = 0.0, diff_sq = 0.0;
    for (std::size_t i = 0; i < ens.particles; ++i) {
      const double e = scale * history[k][i] * history[k][i];
      const double d = e - scale * history[0][i] * history[0][i];
      sum += e;
      diff_sum += d;
      diff_sq += d * d;
    }
    out.energy.push_back(sum / count);
    const double mean = diff_sum / count;
    const double var = ens.particles > 1 ? std::max(0.0, (diff_sq - count * mean * mean) / (count - 1.0)) : 0.0;
    out.std_error.push_back(std::sqrt(var / count));
  }
  return out;
}

/// Overload taking kappa with the phi_d used for unit bookkeeping.
inline EnergySeries run_classical(const ClassicalEnsemble& ens, double kappa, int kicks,
                                  double phi_d_for_units, unsigned threads = 1) {
  if (!(kappa > 0.0) || !(phi_d_for_units > 0.0))
    throw DomainError("kappa and phi_d_for_units must be > 0 (kbar = kappa / phi_d)");
  return run_classical(ens, ScaledParams(kappa / phi_d_for_units, phi_d_for_units, kicks), threads);
}

}  // namespace qkr
