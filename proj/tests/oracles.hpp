#pragma once

// Test-only reference computations, independent of the library code paths.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_100;

/// J_order(x) from the ascending power series in 100-digit arithmetic.
inline double bessel_series(int order, double x) {
  const Big half = Big(x) / 2;
  Big term = 1;
  for (int k = 1; k <= order; ++k) term *= half / k;
  Big sum = term;
  for (int k = 1; k < 4000; ++k) {
    term *= -(half * half) / (Big(k) * (k + order));
    sum += term;
    if (abs(term) < Big("1e-40") && k > abs(half)) break;
  }
  return static_cast<double>(sum);
}

/// sin(x) from its Taylor series in 100-digit arithmetic.
inline double sine_series(double x) {
  const Big bx = x;
  Big term = bx, sum = bx;
  for (int k = 1; k < 200; ++k) {
    term *= -(bx * bx) / (Big(2 * k) * (2 * k + 1));
    sum += term;
    if (abs(term) < Big("1e-40")) break;
  }
  return static_cast<double>(sum);
}

}  // namespace oracle
