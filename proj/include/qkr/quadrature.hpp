#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "units.hpp"

namespace qkr {

struct QuadratureNodes {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;  // weights, summing to 1
};

/// Gauss-Legendre nodes on [-1, 1] with weights normalised to a unit sum.
inline QuadratureNodes gauss_legendre(int points) {
  if (points < 1) throw DomainError("quadrature points must be >= 1");
  QuadratureNodes q;
  q.x.assign(points, 0.0);
  q.w.assign(points, 0.0);
  const int half = (points + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= points; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = points * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    if (points == 1) dp = 1.0;
    const double w = points == 1 ? 1.0 : 1.0 / ((1.0 - z * z) * dp * dp);
    q.x[i] = -z;
    q.x[points - 1 - i] = z;
    q.w[i] = w;
    q.w[points - 1 - i] = w;
  }
  if (points % 2 == 1) q.x[points / 2] = 0.0;
  double total = 0.0;
  for (double w : q.w) total += w;
  for (double& w : q.w) w /= total;
  return q;
}

/// Midpoint rule on [-1, 1] with equal weights.
inline QuadratureNodes midpoint_rule(int points) {
  if (points < 1) throw DomainError("quadrature points must be >= 1");
  QuadratureNodes q;
  for (int i = 0; i < points; ++i) {
    q.x.push_back(2.0 * (i + 0.5) / points - 1.0);
    q.w.push_back(1.0 / points);
  }
  return q;
}

}  // namespace qkr
