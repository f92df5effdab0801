#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qkr/analytic.hpp"

using namespace qkr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
constexpr double pi = std::numbers::pi;

TEST_CASE("kappa_q") {
  CHECK(std::abs(kappa_q(4.8, 2.0 * pi)) < 1e-14);
  CHECK(kappa_q(5.0, pi) == 10.0);
  CHECK_THAT(kappa_q(4.8, 1.0), WithinRel(9.6 * oracle::sine_series(0.5), 1e-15));
  for (double k = 0.01; k < 30.0; k += 0.173) CHECK(std::abs(kappa_q(3.3, k)) <= 6.6);
  CHECK_THROWS_AS(kappa_q(-1.0, 1.0), DomainError);
}

TEST_CASE("first two kicks do not depend on kbar") {
  for (double kbar : {0.1, 1.0, 2.5, 2.0 * pi, 17.0}) {
    CHECK(energy_after_kicks(1, 4.8, kbar, 3.0).value == 3.0 + 4.8 * 4.8);
    CHECK(energy_after_kicks(2, 4.8, kbar, 3.0).value == 3.0 + 2.0 * 4.8 * 4.8);
  }
}

TEST_CASE("energies at resonance are n phi_d^2") {
  for (int n = 1; n <= 5; ++n)
    CHECK_THAT(energy_after_kicks(n, 4.8, 2.0 * pi, 1.5).value - 1.5, WithinRel(n * 4.8 * 4.8, 1e-12));
}

TEST_CASE("four and three kicks against the Bessel series oracle") {
  const double x = 9.6 * oracle::sine_series(0.5);
  const double j1 = oracle::bessel_series(1, x), j2 = oracle::bessel_series(2, x),
               j3 = oracle::bessel_series(3, x);
  const double phi2 = 4.8 * 4.8;
  CHECK_THAT(energy_after_kicks(4, 4.8, 1.0, 0.0).value,
             WithinAbs(phi2 * (4.0 - 4.0 * j2 + 2.0 * j3 - 2.0 * j1 * j1), 1e-11));
  CHECK_THAT(energy_after_kicks(3, 4.8, 1.0, 0.0).value, WithinAbs(phi2 * (3.0 - 2.0 * j2), 1e-11));
  CHECK_THAT(energy_after_kicks(5, 4.8, 1.0, 0.0).value,
             WithinAbs(phi2 * (5.0 - 6.0 * j2 + 4.0 * j3 * j3 - 4.0 * j1 * j1 + 2.0 * j2 * j2), 1e-11));
}

TEST_CASE("kick counts outside 1-5 are rejected") {
  CHECK_THROWS_AS(energy_after_kicks(0, 1.0, 1.0, 0.0), UnsupportedKickCount);
  CHECK_THROWS_AS(energy_after_kicks(6, 1.0, 1.0, 0.0), UnsupportedKickCount);
  CHECK_THROWS_AS(energy_after_kicks(1, -1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(energy_after_kicks(1, 1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("periodicity in kbar") {
  for (int i = 0; i < 64; ++i) {
    const double kbar = 0.05 + 6.1 * i / 63.0;
    const double kq = kappa_q(5.0, kbar);
    CHECK_THAT(kappa_q(5.0, kbar + 4.0 * pi), WithinAbs(kq, 1e-12 * 10.0));
    CHECK_THAT(kappa_q(5.0, kbar + 2.0 * pi), WithinAbs(-kq, 1e-12 * 10.0));
    for (int n : {1, 2, 3, 5}) {
      const double e = energy_after_kicks(n, 5.0, kbar, 0.0).value;
      CHECK_THAT(energy_after_kicks(n, 5.0, kbar + 2.0 * pi, 0.0).value, WithinRel(e, 1e-12));
    }
    const double e4 = energy_after_kicks(4, 5.0, kbar, 0.0).value;
    CHECK_THAT(energy_after_kicks(4, 5.0, kbar + 4.0 * pi, 0.0).value, WithinRel(e4, 1e-12));
  }
  // The odd J3 term breaks 2 pi periodicity of E4 wherever J3(kappa_q) != 0.
  const double e4 = energy_after_kicks(4, 5.0, 1.0, 0.0).value;
  const double shifted = energy_after_kicks(4, 5.0, 1.0 + 2.0 * pi, 0.0).value;
  const double j3 = bessel_j(3, kappa_q(5.0, 1.0));
  CHECK_THAT(e4 - shifted, WithinAbs(25.0 * 4.0 * j3, 1e-10));
}

TEST_CASE("E1 < E2 < ... < E5 at resonance") {
  for (double phi : {0.5, 3.4, 8.2})
    for (int n = 1; n < 5; ++n)
      CHECK(energy_after_kicks(n, phi, 4.0 * pi, 0.0).value < energy_after_kicks(n + 1, phi, 4.0 * pi, 0.0).value);
}

TEST_CASE("spread quadrature weights") {
  for (int m : {1, 2, 7, 51}) {
    for (auto rule : {SpreadQuadrature::gauss_legendre, SpreadQuadrature::midpoint}) {
      IntensitySpread s{0.1, m, SpreadDistribution::uniform, rule};
      double total = 0.0;
      for (const auto& [phi, w] : s.samples(2.0)) {
        CHECK(w >= 0.0);
        CHECK(phi >= 1.8);
        CHECK(phi <= 2.2);
        total += w;
      }
      CHECK_THAT(total, WithinAbs(1.0, 1e-14));
    }
  }
}

TEST_CASE("degenerate spreads reproduce the bare formula bit for bit") {
  for (int n = 1; n <= 5; ++n) {
    const double bare = energy_after_kicks(n, 4.8, 1.3, 0.7).value;
    CHECK(energy_spread_averaged(n, 4.8, 1.3, 0.7, IntensitySpread{0.0, 51}).value == bare);
    CHECK(energy_spread_averaged(n, 4.8, 1.3, 0.7, IntensitySpread{0.1, 1}).value == bare);
  }
}

TEST_CASE("spread average of the one-kick energy is the second moment") {
  const double phi = 4.8, delta = 0.1;
  const double e = energy_spread_averaged(1, phi, 0.9, 0.0, IntensitySpread::uniform(delta, 51)).value;
  CHECK_THAT(e, WithinAbs(phi * phi * (1.0 + delta * delta / 3.0), 1e-10));
}

TEST_CASE("spread-averaged five-kick curve against Monte Carlo averaging") {
  // 1e6 uniform draws of phi in [0.9 phi, 1.1 phi] per grid point.
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const IntensitySpread spread = IntensitySpread::uniform(0.1, 51);
  for (double kbar : {0.4, 1.1, 2.0, 3.7, 5.5}) {
    constexpr int samples = 1000000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double phi = 4.8 * (1.0 + 0.1 * u(rng));
      const double x = 2.0 * phi * std::sin(kbar / 2.0);
      const double j1 = std::cyl_bessel_j(1.0, std::abs(x)), j2 = std::cyl_bessel_j(2.0, std::abs(x)),
                   j3 = std::cyl_bessel_j(3.0, std::abs(x));
      const double e = phi * phi * (5.0 - 6.0 * j2 + 4.0 * j3 * j3 - 4.0 * j1 * j1 + 2.0 * j2 * j2);
      sum += e;
      sq += e * e;
    }
    const double mean = sum / samples;
    const double se = std::sqrt((sq / samples - mean * mean) / samples);
    const double quad = energy_spread_averaged(5, 4.8, kbar, 0.0, spread).value;
    INFO("kbar=" << kbar << " quad=" << quad << " mc=" << mean << " se=" << se);
    CHECK(std::abs(quad - mean) <= 3.0 * se);
  }
}

TEST_CASE("midpoint rule is available but less accurate on the second moment") {
  IntensitySpread mid{0.1, 51, SpreadDistribution::uniform, SpreadQuadrature::midpoint};
  const double e = energy_spread_averaged(1, 4.8, 0.9, 0.0, mid).value;
  const double exact = 4.8 * 4.8 * (1.0 + 0.01 / 3.0);
  CHECK_THAT(e, WithinAbs(exact - 4.8 * 4.8 * 0.01 / (3.0 * 51.0 * 51.0), 1e-12));
}

TEST_CASE("analytic_sweep") {
  const auto spread = IntensitySpread::uniform(0.1, 51);
  SECTION("two kicks are flat") {
    std::vector<double> grid;
    for (int i = 0; i < 40; ++i) grid.push_back(0.1 + 0.3 * i);
    const auto r = analytic_sweep({2}, 4.8, grid, 0.0, spread);
    REQUIRE(r.rows.size() == grid.size());
    for (const auto& row : r.rows) CHECK_THAT(row.energy, WithinRel(r.rows.front().energy, 1e-12));
  }
  SECTION("resonance column") {
    const auto r = analytic_sweep({1, 2, 3, 4, 5}, 4.8, {2.0 * pi}, 0.0, spread);
    REQUIRE(r.rows.size() == 5);
    for (const auto& row : r.rows)
      CHECK_THAT(row.energy, WithinRel(row.kicks * 4.8 * 4.8 * (1.0 + 0.01 / 3.0), 1e-10));
  }
  SECTION("row order is kicks-major") {
    const auto r = analytic_sweep({5, 3}, 4.8, {0.5, 1.0, 1.5}, 0.0, spread);
    REQUIRE(r.rows.size() == 6);
    CHECK(r.rows[0].kicks == 3);
    CHECK(r.rows[2].kbar == 1.5);
    CHECK(r.rows[3].kicks == 5);
    CHECK(r.rows[3].kbar == 0.5);
  }
  SECTION("Fig. 1 structure: 3-5 kicks develop extrema below the resonance") {
    std::vector<double> grid;
    for (int i = 1; i <= 256; ++i) grid.push_back(2.0 * pi * i / 257.0);
    const auto r = analytic_sweep({3, 4, 5}, 4.8, grid, 0.0, spread);
    for (int n : {3, 4, 5}) {
      std::vector<double> e;
      for (const auto& row : r.rows)
        if (row.kicks == n) e.push_back(row.energy);
      int extrema = 0;
      for (std::size_t i = 1; i + 1 < e.size(); ++i)
        if ((e[i] > e[i - 1] && e[i] > e[i + 1]) || (e[i] < e[i - 1] && e[i] < e[i + 1])) ++extrema;
      INFO("n=" << n);
      CHECK(extrema >= 1);
      // approaching the resonance from below the energy returns to n phi^2 (1 + delta^2/3)
      CHECK_THAT(e.back(), WithinRel(n * 4.8 * 4.8 * (1.0 + 0.01 / 3.0), 0.02));
    }
  }
  SECTION("errors") {
    CHECK_THROWS_AS(analytic_sweep({2}, 4.8, {}, 0.0, spread), DomainError);
    CHECK_THROWS_AS(analytic_sweep({2}, 4.8, {1.0, 1.0}, 0.0, spread), DomainError);
    CHECK_THROWS_AS(analytic_sweep({6}, 4.8, {1.0}, 0.0, spread), UnsupportedKickCount);
  }
}
