#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qkr/units.hpp"

using namespace qkr;
using Catch::Matchers::WithinRel;

TEST_CASE("scaled_from_physical applies the definitions") {
  const PhysicalParams p{2.0e4, 3.0e7, 3.0e-7, 2.0e-5, {}, {}};
  const auto s = scaled_from_physical(p, 5);
  CHECK(s.kbar() == 8.0 * 2.0e4 * 2.0e-5);
  CHECK(s.phi_d() == 3.0e7 * 3.0e-7 / 2.0);
  CHECK(s.kicks() == 5);
  CHECK_THAT(s.kappa(), WithinRel(4.0 * 3.0e7 * 2.0e4 * 3.0e-7 * 2.0e-5, 1e-12));
}

TEST_CASE("kappa identity holds over a range of inputs") {
  for (double wr : {1.0e3, 2.3e4, 9.1e5})
    for (double rabi : {1.0e6, 4.4e7})
      for (double tau : {1e-7, 5e-7})
        for (double T : {1e-6, 3.3e-5, 1e-3}) {
          const auto s = scaled_from_physical({wr, rabi, tau, T, {}, {}}, 1);
          CHECK_THAT(s.phi_d() * s.kbar(), WithinRel(4.0 * rabi * wr * tau * T, 1e-12));
        }
}

TEST_CASE("phi_d ignores T and kbar ignores the pulse") {
  const PhysicalParams a{2.0e4, 3.0e7, 3.0e-7, 2.0e-5, {}, {}};
  PhysicalParams b = a;
  b.T = 7.7e-5;
  CHECK(scaled_from_physical(a, 1).phi_d() == scaled_from_physical(b, 1).phi_d());
  PhysicalParams c = a;
  c.Omega_R = 9.0e6;
  c.tau_p = 1.1e-6;
  CHECK(scaled_from_physical(a, 1).kbar() == scaled_from_physical(c, 1).kbar());
}

TEST_CASE("period_for_kbar inverts the kbar definition") {
  const double w = 2.5e4;
  CHECK_THAT(period_for_kbar(w, 2.0 * std::numbers::pi), WithinRel(std::numbers::pi / (4.0 * w), 1e-15));
  const double t0 = 3.1e-5;
  CHECK_THAT(period_for_kbar(w, 8.0 * w * t0), WithinRel(t0, 1e-15));

  // log-spaced kbar in [0.1, 20 pi]
  const double lo = std::log(0.1), hi = std::log(20.0 * std::numbers::pi);
  for (int i = 0; i <= 200; ++i) {
    const double kbar = std::exp(lo + (hi - lo) * i / 200.0);
    const double T = period_for_kbar(w, kbar);
    const auto s = scaled_from_physical({w, 1.0e7, 0.01 * T, T, {}, {}}, 1);
    CHECK_THAT(s.kbar(), WithinRel(kbar, 1e-12));
  }

  const double w2pi = 2.0 * std::numbers::pi / (8.0 * 1e-5);
  CHECK_THAT(scaled_from_physical({w2pi, 1e7, 1e-7, 1e-5, {}, {}}, 1).kbar(),
             WithinRel(2.0 * std::numbers::pi, 1e-15));
}

TEST_CASE("rabi_effective") {
  CHECK(rabi_effective(2.0, 1.0) == 1.0);
  CHECK(rabi_effective(0.0, 3.0) == 0.0);
  CHECK(rabi_effective(3.0, 2.0) == rabi_effective(3.0, 1.0) / 2.0);
  CHECK_THROWS_AS(rabi_effective(1.0, 0.0), DomainError);
}

TEST_CASE("invalid physical inputs name the field") {
  auto message = [](PhysicalParams p) {
    try {
      scaled_from_physical(p, 1);
    } catch (const DomainError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK_THAT(message({0.0, 1.0, 1e-7, 1e-5, {}, {}}), Catch::Matchers::ContainsSubstring("omega_r"));
  CHECK_THAT(message({1.0, -1.0, 1e-7, 1e-5, {}, {}}), Catch::Matchers::ContainsSubstring("Omega_R"));
  CHECK_THAT(message({1.0, 1.0, 0.0, 1e-5, {}, {}}), Catch::Matchers::ContainsSubstring("tau_p"));
  CHECK_THAT(message({1.0, 1.0, 1e-7, -1.0, {}, {}}), Catch::Matchers::ContainsSubstring("T "));
  CHECK_THAT(message({1.0, 1.0, 1e-5, 1e-5, {}, {}}), Catch::Matchers::ContainsSubstring("tau_p must be < T"));
  CHECK_THROWS_AS(period_for_kbar(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(period_for_kbar(1.0, -1.0), DomainError);
  CHECK_THROWS_AS(ScaledParams(1.0, 1.0, 0), DomainError);
  CHECK_THROWS_AS(ScaledParams(0.0, 1.0, 1), DomainError);
}

TEST_CASE("Omega/Delta consistency is enforced") {
  const auto p = physical_from_rabi(2e4, 4e8, 8e9, 3e-7, 2e-5);
  CHECK_THAT(p.Omega_R, WithinRel(4e8 * 4e8 / (4.0 * 8e9), 1e-15));
  PhysicalParams bad = p;
  bad.Omega_R *= 1.0 + 1e-9;
  CHECK_THROWS_AS(validate(bad), DomainError);
}
