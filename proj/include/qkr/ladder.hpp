#pragma once

// Quantum state of one quasimomentum class on the two-photon-recoil ladder.
//
// The amplitude at array index i belongs to ladder site n = centre - n_max + i
// and carries momentum p = n + q (in two-photon recoils). In scaled units
// rho = kbar (n + q), so one Floquet period is
//
//   kick:  exp(-i phi_d cos phi)        c'_n = sum_m (-i)^m J_m(phi_d) c_{n-m}
//   free:  exp(-i kbar (n + q)^2 / 2)

#include <cmath>
#include <complex>
#include <algorithm>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "bessel.hpp"
#include "units.hpp"

namespace qkr {

using Complex = std::complex<double>;

/// Energy calibration: E = C * <(n + q)^2>. C = 2 makes the first-kick
/// growth from any plane wave equal phi_d^2, matching E1 = E0 + phi_d^2.
inline constexpr double kEnergyCalibration = 2.0;

/// Boundary occupancy above this after a kick means the ladder is too short.
inline constexpr double kTruncationTolerance = 1e-10;

/// Populations below this are treated as empty when kicking.
inline constexpr double kNegligibleOccupancy = 1e-60;

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LadderState {
  double q = 0.0;
  int n_max = 0;
  long centre = 0;
  std::vector<Complex> amps;

  std::size_t size() const noexcept { return amps.size(); }
  long site(std::size_t index) const noexcept {
    return centre - n_max + static_cast<long>(index);
  }
  double momentum(std::size_t index) const noexcept { return static_cast<double>(site(index)) + q; }

  /// Amplitude at absolute ladder site n (zero outside the window).
  Complex amp(long n) const noexcept {
    const long i = n - centre + n_max;
    if (i < 0 || i >= static_cast<long>(amps.size())) return {};
    return amps[static_cast<std::size_t>(i)];
  }

  double norm() const noexcept {
    double s = 0.0;
    for (const Complex& c : amps) s += std::norm(c);
    return s;
  }

  /// |c|^2 summed over the two outermost sites at each end.
  double boundary_occupancy() const noexcept {
    const std::size_t n = amps.size();
    if (n < 4) return norm();
    return std::norm(amps[0]) + std::norm(amps[1]) + std::norm(amps[n - 2]) +
           std::norm(amps[n - 1]);
  }
};

namespace detail {
inline void check_q(double q) {
  if (!(q >= 0.0 && q < 1.0)) throw DomainError("quasimomentum q must lie in [0, 1)");
}
}  // namespace detail

/// Momentum eigenstate at site n0 on a ladder window centred on n0.
inline LadderState plane_wave_centred(long n0, double q, int n_max) {
  detail::check_q(q);
  if (n_max < 2) throw DomainError("n_max must be >= 2");
  LadderState s{q, n_max, n0, std::vector<Complex>(2 * static_cast<std::size_t>(n_max) + 1)};
  s.amps[static_cast<std::size_t>(n_max)] = 1.0;
  return s;
}

/// Momentum eigenstate at site n0 on the ladder [-n_max, n_max].
inline LadderState plane_wave(long n0, double q, int n_max) {
  if (!(std::abs(n0) < n_max)) throw DomainError("plane wave site |n0| must be < n_max");
  detail::check_q(q);
  LadderState s{q, n_max, 0, std::vector<Complex>(2 * static_cast<std::size_t>(n_max) + 1)};
  s.amps[static_cast<std::size_t>(n0 + n_max)] = 1.0;
  return s;
}

inline double energy_of_state(const LadderState& s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < s.amps.size(); ++i) {
    const double p = s.momentum(i);
    sum += p * p * std::norm(s.amps[i]);
  }
  return kEnergyCalibration * sum;
}

/// Precomputed banded kick unitary for one phi_d.
class KickOperator {
 public:
  explicit KickOperator(double phi_d) : phi_d_(phi_d) {
    if (!(phi_d >= 0.0) || !std::isfinite(phi_d)) throw DomainError("phi_d must be finite and >= 0");
    const int reach = static_cast<int>(std::ceil(phi_d + 10.0 * std::max(1.0, std::cbrt(phi_d)))) + 10;
    const std::vector<double> j = bessel_j_sequence(reach, phi_d);
    int band = 0;
    for (int m = 0; m <= reach; ++m)
      if (std::abs(j[m]) > 1e-300 && (m <= phi_d || std::abs(j[m]) > 1e-18)) band = m;
    band_ = band;
    coeffs_.resize(2 * static_cast<std::size_t>(band_) + 1);
    // (-i)^m for m = 0, 1, 2, 3 (mod 4)
    const Complex phase[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
    for (int m = -band_; m <= band_; ++m) {
      const int am = std::abs(m);
      const double jm = (m < 0 && am % 2 == 1) ? -j[am] : j[am];
      coeffs_[static_cast<std::size_t>(m + band_)] = phase[((m % 4) + 4) % 4] * jm;
    }
  }

  double phi_d() const noexcept { return phi_d_; }
  int band() const noexcept { return band_; }

  /// Coefficient for a transfer of m ladder steps.
  Complex coefficient(int m) const noexcept {
    if (std::abs(m) > band_) return {};
    return coeffs_[static_cast<std::size_t>(m + band_)];
  }

  /// out[i] = sum_m coeff(m) in[i - m] for i in [lo, hi]; other outputs
  /// are zeroed. `out` must not alias `in`.
  void apply(std::span<const Complex> in, std::span<Complex> out, long lo, long hi) const noexcept {
    const long n = static_cast<long>(in.size());
    const long b = band_;
    std::fill(out.begin(), out.end(), Complex{});
    for (long i = std::max(0L, lo); i <= std::min(n - 1, hi); ++i) {
      const long m_lo = std::max(-b, i - (n - 1));
      const long m_hi = std::min(b, i);
      Complex acc{};
      for (long m = m_lo; m <= m_hi; ++m) acc += coeffs_[static_cast<std::size_t>(m + b)] * in[i - m];
      out[i] = acc;
    }
  }

  void apply(std::span<const Complex> in, std::span<Complex> out) const noexcept {
    apply(in, out, 0, static_cast<long>(in.size()) - 1);
  }

  /// Kicks `s` in place. Sites with |c|^2 below kNegligibleOccupancy are
  /// dropped before the convolution so that only the occupied part of the
  /// ladder is touched.
  void apply(LadderState& s, std::vector<Complex>& scratch) const {
    scratch.resize(s.amps.size());
    long first = -1, last = -1;
    for (std::size_t i = 0; i < s.amps.size(); ++i) {
      if (std::norm(s.amps[i]) < kNegligibleOccupancy) {
        s.amps[i] = {};
      } else {
        if (first < 0) first = static_cast<long>(i);
        last = static_cast<long>(i);
      }
    }
    if (first < 0) return;
    apply(s.amps, scratch, first - band_, last + band_);
    s.amps.swap(scratch);
    if (s.boundary_occupancy() >= kTruncationTolerance)
      throw TruncationError("ladder truncation n_max=" + std::to_string(s.n_max) +
                            " too small: boundary occupancy " +
                            std::to_string(s.boundary_occupancy()) + "; increase n_max");
  }

 private:
  double phi_d_;
  int band_ = 0;
  std::vector<Complex> coeffs_;
};

inline LadderState apply_kick(LadderState s, double phi_d) {
  std::vector<Complex> scratch;
  KickOperator(phi_d).apply(s, scratch);
  return s;
}

/// Free-evolution phase for momentum p, reduced to [0, 2 pi).
inline double free_phase(double kbar, double p) {
  return std::fmod(0.5 * kbar * p * p, 2.0 * std::numbers::pi);
}

inline void apply_free_inplace(LadderState& s, double kbar) {
  for (std::size_t i = 0; i < s.amps.size(); ++i)
    if (s.amps[i] != Complex{}) s.amps[i] *= std::polar(1.0, -free_phase(kbar, s.momentum(i)));
}

inline LadderState apply_free(LadderState s, double kbar) {
  if (!(kbar > 0.0)) throw DomainError("kbar must be > 0");
  apply_free_inplace(s, kbar);
  return s;
}

}  // namespace qkr
