#pragma once

// Closed-form mean energies after the first five kicks.
//
// With kappa_q = 2 phi_d sin(kbar/2):
//   E1 = E0 + phi_d^2
//   E2 = E0 + 2 phi_d^2
//   E3 = E0 + phi_d^2 (3 - 2 J2)
//   E4 = E0 + phi_d^2 (4 - 4 J2 + 2 J3 - 2 J1^2)
//   E5 = E0 + phi_d^2 (5 - 6 J2 + 4 J3^2 - 4 J1^2 + 2 J2^2)   (approximate)
//
// Periodicity: kappa_q flips sign under kbar -> kbar + 2 pi. E1, E2, E3 and
// E5 only contain even functions of kappa_q and are 2 pi periodic in kbar.
// The linear J3 term makes E4 4 pi periodic only.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "bessel.hpp"
#include "quadrature.hpp"
#include "result.hpp"
#include "units.hpp"

namespace qkr {

inline constexpr int kMaxAnalyticKicks = 5;

class UnsupportedKickCount : public DomainError {
 public:
  explicit UnsupportedKickCount(int n)
      : DomainError("no closed form for " + std::to_string(n) + " kicks (supported: 1-5)") {}
};

enum class SpreadDistribution { uniform };

enum class SpreadQuadrature { gauss_legendre, midpoint };

/// Fractional spread of phi_d over [phi(1-delta), phi(1+delta)].
struct IntensitySpread {
  double relative_width = 0.0;
  int quadrature_points = 1;
  SpreadDistribution distribution = SpreadDistribution::uniform;
  SpreadQuadrature rule = SpreadQuadrature::gauss_legendre;

  static IntensitySpread none() { return {}; }
  static IntensitySpread uniform(double delta, int points = 51) {
    return {delta, points, SpreadDistribution::uniform, SpreadQuadrature::gauss_legendre};
  }

  bool degenerate() const { return relative_width == 0.0 || quadrature_points == 1; }

  void validate() const {
    if (!(relative_width >= 0.0 && relative_width < 1.0))
      throw DomainError("spread.relative_width must lie in [0, 1)");
    if (quadrature_points < 1) throw DomainError("spread.points must be >= 1");
  }

  /// Sampled (phi, weight) pairs around a nominal phi_d. Degenerate spreads
  /// return the nominal value with weight 1.
  std::vector<std::pair<double, double>> samples(double phi_nominal) const {
    validate();
    if (degenerate()) return {{phi_nominal, 1.0}};
    const QuadratureNodes q = rule == SpreadQuadrature::gauss_legendre
                                  ? gauss_legendre(quadrature_points)
                                  : midpoint_rule(quadrature_points);
    std::vector<std::pair<double, double>> out;
    out.reserve(q.x.size());
    for (std::size_t i = 0; i < q.x.size(); ++i)
      out.emplace_back(phi_nominal * (1.0 + relative_width * q.x[i]), q.w[i]);
    return out;
  }
};

struct EnergyValue {
  double value = 0.0;
  int kick_index = 0;
};

inline double kappa_q(double phi_d, double kbar) {
  if (!(phi_d >= 0.0)) throw DomainError("phi_d must be >= 0");
  return 2.0 * phi_d * std::sin(0.5 * kbar);
}

/// Bracketed correction factor E_n - E0 = phi_d^2 * factor, as a function of
/// the Bessel argument. Exposed so the classical limit (argument -> kappa)
/// can reuse it.
inline double kick_energy_factor(int n, double x) {
  if (n < 1 || n > kMaxAnalyticKicks) throw UnsupportedKickCount(n);
  if (n <= 2) return n;
  const double j1 = bessel_j(1, x);
  const double j2 = bessel_j(2, x);
  const double j3 = bessel_j(3, x);
  switch (n) {
    case 3:
      return 3.0 - 2.0 * j2;
    case 4:
      return 4.0 - 4.0 * j2 + 2.0 * j3 - 2.0 * j1 * j1;
    default:
      return 5.0 - 6.0 * j2 + 4.0 * j3 * j3 - 4.0 * j1 * j1 + 2.0 * j2 * j2;
  }
}

inline EnergyValue energy_after_kicks(int n, double phi_d, double kbar, double E0) {
  if (n < 1 || n > kMaxAnalyticKicks) throw UnsupportedKickCount(n);
  if (!(phi_d >= 0.0)) throw DomainError("phi_d must be >= 0");
  if (!(E0 >= 0.0)) throw DomainError("E0 must be >= 0");
  const double factor = kick_energy_factor(n, kappa_q(phi_d, kbar));
  return {E0 + phi_d * phi_d * factor, n};
}

inline EnergyValue energy_spread_averaged(int n, double phi_d_nominal, double kbar, double E0,
                                          const IntensitySpread& spread) {
  if (spread.degenerate()) {
    spread.validate();
    return energy_after_kicks(n, phi_d_nominal, kbar, E0);
  }
  double sum = 0.0;
  for (const auto& [phi, w] : spread.samples(phi_d_nominal))
    sum += w * energy_after_kicks(n, phi, kbar, E0).value;
  return {sum, n};
}

inline void require_increasing_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw DomainError("kbar grid must be non-empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("kbar grid must be strictly increasing");
}

/// Rows ordered kicks-major, kbar ascending.
inline SweepResult analytic_sweep(const std::set<int>& n_list, double phi_d,
                                  const std::vector<double>& kbar_grid, double E0,
                                  const IntensitySpread& spread) {
  require_increasing_grid(kbar_grid);
  if (n_list.empty()) throw DomainError("kick list must be non-empty");
  for (int n : n_list)
    if (n < 1 || n > kMaxAnalyticKicks) throw UnsupportedKickCount(n);
  SweepResult out;
  out.rows.reserve(n_list.size() * kbar_grid.size());
  for (int n : n_list)
    for (double kbar : kbar_grid)
      out.rows.push_back(
          {kbar, phi_d, n, energy_spread_averaged(n, phi_d, kbar, E0, spread).value, "analytic"});
  return out;
}

}  // namespace qkr
