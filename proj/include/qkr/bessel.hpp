#pragma once

// Integer-order Bessel functions of the first kind.
//
// Small arguments use the ascending series directly. Everything else goes
// through Miller's backward recurrence normalised with
// J_0 + 2 sum_k J_2k = 1, which is stable for all orders and keeps the
// absolute error near machine epsilon for |x| up to a few hundred.

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "units.hpp"

namespace qkr {

inline constexpr int kMaxPublicBesselOrder = 8;
inline constexpr double kMaxPublicBesselArgument = 50.0;

namespace detail {

inline double bessel_series(int order, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= order; ++k) term *= half / k;
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Fills J_0..J_max_order for x > 0.
inline std::vector<double> miller_sequence(int max_order, double x) {
  // Start well above both the requested order and the turning point m ~ x.
  const int start_hint = std::max(max_order, static_cast<int>(x)) +
                         static_cast<int>(12.0 + 3.0 * std::cbrt(x) + 2.0 * std::sqrt(x + 40.0));
  const int start = start_hint + (start_hint % 2);  // even
  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  double next = 0.0;
  double cur = 1e-300;
  j[start] = cur;
  double norm = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = (2.0 * k / x) * cur - next;
    next = cur;
    cur = prev;
    j[k - 1] = cur;
    if (std::abs(cur) > 1e250) {
      for (int m = k - 1; m <= start; ++m) j[m] *= 1e-250;
      cur *= 1e-250;
      next *= 1e-250;
    }
  }
  norm = j[0];
  for (int k = 2; k <= start; k += 2) norm += 2.0 * j[k];
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
  for (int k = 0; k <= max_order; ++k) out[k] = j[k] / norm;
  return out;
}

inline bool use_series(int order, double ax) { return ax <= 2.0 || ax * ax < 0.25 * (order + 1); }

}  // namespace detail

/// J_0(x) .. J_max_order(x) for any real x. Used for kick coefficients,
/// where orders well beyond the public bessel_j range are needed.
inline std::vector<double> bessel_j_sequence(int max_order, double x) {
  if (max_order < 0) throw DomainError("bessel order must be >= 0");
  if (!std::isfinite(x)) throw DomainError("bessel argument must be finite");
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  const double ax = std::abs(x);
  if (ax == 0.0) {
    out[0] = 1.0;
    return out;
  }
  if (ax <= 2.0) {
    for (int k = 0; k <= max_order; ++k) out[k] = detail::bessel_series(k, ax);
  } else {
    out = detail::miller_sequence(max_order, ax);
  }
  if (x < 0.0)
    for (int k = 1; k <= max_order; k += 2) out[k] = -out[k];
  return out;
}

/// J_order(x) for 0 <= order <= 8 and |x| <= 50.
inline double bessel_j(int order, double x) {
  if (order < 0 || order > kMaxPublicBesselOrder)
    throw DomainError("bessel order " + std::to_string(order) + " outside [0, 8]");
  if (!(std::abs(x) <= kMaxPublicBesselArgument))
    throw DomainError("bessel argument outside [-50, 50]");
  const double ax = std::abs(x);
  double v;
  if (ax == 0.0) {
    v = order == 0 ? 1.0 : 0.0;
  } else if (detail::use_series(order, ax)) {
    v = detail::bessel_series(order, ax);
  } else {
    v = detail::miller_sequence(order, ax)[order];
  }
  return (x < 0.0 && order % 2 == 1) ? -v : v;
}

}  // namespace qkr
