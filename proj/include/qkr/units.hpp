#pragma once

// Laboratory <-> scaled parameters for the atom-optics kicked rotor.
//
// All angular frequencies are in rad/s and all times in seconds. The scaled
// Hamiltonian is H' = rho^2/2 + kappa cos(phi) sum_n f(tau - n) with
//
//   kbar  = 8 omega_r T            effective Planck constant
//   phi_d = Omega_R tau_p / 2      kick phase depth
//   kappa = 4 Omega_R omega_r tau_p T = kbar * phi_d

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace qkr {

/// Thrown when an input lies outside the documented domain. The message
/// names the offending field.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct PhysicalParams {
  double omega_r = 0.0;  // recoil frequency hbar k_l^2 / 2m
  double Omega_R = 0.0;  // effective Rabi frequency
  double tau_p = 0.0;    // pulse length
  double T = 0.0;        // kick period
  std::optional<double> Omega;  // bare Rabi frequency
  std::optional<double> Delta;  // detuning
};

class ScaledParams {
 public:
  ScaledParams() = default;
  ScaledParams(double kbar, double phi_d, int kicks) : kbar_(kbar), phi_d_(phi_d), kicks_(kicks) {
    if (!(kbar > 0.0) || !std::isfinite(kbar)) throw DomainError("kbar must be finite and > 0");
    if (!(phi_d >= 0.0) || !std::isfinite(phi_d)) throw DomainError("phi_d must be finite and >= 0");
    if (kicks < 1) throw DomainError("kicks must be >= 1");
  }

  double kbar() const noexcept { return kbar_; }
  double phi_d() const noexcept { return phi_d_; }
  int kicks() const noexcept { return kicks_; }
  double kappa() const noexcept { return kbar_ * phi_d_; }

 private:
  double kbar_ = 1.0;
  double phi_d_ = 0.0;
  int kicks_ = 1;
};

inline double rabi_effective(double Omega, double Delta) {
  if (Delta == 0.0) throw DomainError("Delta must be non-zero");
  return Omega * Omega / (4.0 * Delta);
}

namespace detail {
inline void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw DomainError(std::string(field) + " must be finite and > 0");
}
}  // namespace detail

inline void validate(const PhysicalParams& p) {
  detail::require_positive(p.omega_r, "omega_r");
  detail::require_positive(p.Omega_R, "Omega_R");
  detail::require_positive(p.tau_p, "tau_p");
  detail::require_positive(p.T, "T");
  if (!(p.tau_p < p.T)) throw DomainError("tau_p must be < T (delta-kick regime)");
  if (p.Omega && p.Delta) {
    detail::require_positive(*p.Omega, "Omega");
    detail::require_positive(*p.Delta, "Delta");
    const double expected = rabi_effective(*p.Omega, *p.Delta);
    if (std::abs(expected - p.Omega_R) > 1e-12 * std::abs(expected))
      throw DomainError("Omega_R must equal Omega^2/(4 Delta)");
  }
}

/// Builds a PhysicalParams whose Omega_R is derived from (Omega, Delta).
inline PhysicalParams physical_from_rabi(double omega_r, double Omega, double Delta, double tau_p,
                                         double T) {
  PhysicalParams p{omega_r, rabi_effective(Omega, Delta), tau_p, T, Omega, Delta};
  validate(p);
  return p;
}

inline ScaledParams scaled_from_physical(const PhysicalParams& p, int kicks) {
  validate(p);
  return ScaledParams(8.0 * p.omega_r * p.T, 0.5 * p.Omega_R * p.tau_p, kicks);
}

/// Kick period that realises a given kbar.
inline double period_for_kbar(double omega_r, double kbar) {
  detail::require_positive(omega_r, "omega_r");
  detail::require_positive(kbar, "kbar");
  return kbar / (8.0 * omega_r);
}

}  // namespace qkr
