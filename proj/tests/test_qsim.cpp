#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qkr/qsim.hpp"

using namespace qkr;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
constexpr double pi = std::numbers::pi;

TEST_CASE("one kick from rest adds phi_d^2 for any kbar") {
  for (double kbar : {0.3, 1.7, 2.0 * pi, 9.0}) {
    const auto e = run_trajectory(plane_wave(0, 0.0, 64), ScaledParams(kbar, 4.8, 1)).energy;
    REQUIRE(e.size() == 2);
    CHECK(e[0] == 0.0);
    CHECK_THAT(e[1] - e[0], WithinAbs(4.8 * 4.8, 1e-10));
  }
}

TEST_CASE("zero kick strength gives a constant series") {
  const auto e = run_trajectory(plane_wave(2, 0.3, 16), ScaledParams(1.1, 0.0, 7)).energy;
  REQUIRE(e.size() == 8);
  for (double v : e) CHECK_THAT(v, WithinRel(e[0], 1e-14));
}

TEST_CASE("default ladder size") {
  CHECK(default_n_max(1, 0.0) == 8 + 16);
  CHECK(default_n_max(5, 8.0, 3) == static_cast<int>(std::ceil(5 * (8.0 + 16.0) + 3)) + 16);
}

TEST_CASE("norm is conserved over 80 kicks") {
  const ScaledParams p(1.9, 4.8, 80);
  LadderState s = plane_wave(0, 0.31, default_n_max(80, 4.8));
  const KickOperator kick(4.8);
  std::vector<Complex> scratch;
  double worst = 0.0;
  for (int k = 0; k < p.kicks(); ++k) {
    const double before = s.norm();
    kick.apply(s, scratch);
    worst = std::max(worst, std::abs(s.norm() - before));
    apply_free_inplace(s, p.kbar());
  }
  CHECK(worst <= 1e-12);
  CHECK(std::abs(s.norm() - 1.0) <= 1e-10);
}

TEST_CASE("trajectories depend on total momentum only") {
  const ScaledParams p(1.3, 3.0, 5);
  const auto a = run_trajectory(plane_wave(1, 0.25, 100), p).energy;
  const auto b = run_trajectory(plane_wave_centred(1, 0.25, 60), p).energy;
  for (std::size_t k = 0; k < a.size(); ++k) CHECK_THAT(a[k], WithinRel(b[k], 1e-10));
}

TEST_CASE("degenerate ensemble equals a single trajectory") {
  EnsembleSpec spec;
  spec.n_q = 1;
  const ScaledParams p(1.3, 3.0, 5);
  // the single midpoint sample sits at q = 0.5
  const auto ens = run_ensemble(spec, p, IntensitySpread::none()).energy;
  const auto traj = run_trajectory(plane_wave(0, 0.5, default_n_max(5, 3.0)), p).energy;
  for (std::size_t k = 0; k < ens.size(); ++k) CHECK(ens[k] == traj[k]);
}

TEST_CASE("ensemble at the quantum resonance grows linearly") {
  EnsembleSpec spec;
  spec.n_q = 512;
  const auto e = run_ensemble(spec, ScaledParams(2.0 * pi, 4.8, 5), IntensitySpread::none(), {0}).energy;
  for (int n = 1; n <= 5; ++n) CHECK_THAT(e[n] - e[0], WithinRel(n * 4.8 * 4.8, 0.01));
}

TEST_CASE("ensemble weights sum to one") {
  EnsembleSpec spec;
  spec.n_q = 7;
  spec.initial = InitialDistribution::discrete_gaussian;
  spec.sigma_s = 2.5;
  const auto members = ensemble_members(spec, 3.0, IntensitySpread::uniform(0.1, 5));
  double total = 0.0;
  for (const auto& m : members) total += m.weight;
  CHECK_THAT(total, WithinAbs(1.0, 1e-14));
  CHECK(members.size() == 5u * 7u * (2u * 16u + 1u));
}

TEST_CASE("random quasimomenta are reproducible and in range") {
  EnsembleSpec spec;
  spec.n_q = 100;
  spec.q_sampling = QSampling::random;
  spec.seed = 42;
  const auto a = quasimomenta(spec), b = quasimomenta(spec);
  CHECK(a == b);
  for (double q : a) CHECK((q >= 0.0 && q < 1.0));
  spec.seed = 43;
  CHECK(quasimomenta(spec) != a);
}

TEST_CASE("parallel and serial ensembles agree bit for bit") {
  EnsembleSpec spec;
  spec.n_q = 64;
  spec.q_sampling = QSampling::random;
  spec.seed = 7;
  const ScaledParams p(2.3, 4.0, 5);
  const auto spread = IntensitySpread::uniform(0.1, 3);
  const auto serial = run_ensemble(spec, p, spread, {1}).energy;
  const auto parallel = run_ensemble(spec, p, spread, {8}).energy;
  CHECK(serial == parallel);
}

TEST_CASE("broad momentum ensembles reproduce the first three kicks") {
  // Momentum spread >> 1/kbar ladder steps randomises the free-evolution
  // cross terms; E1-E3 are then exact.
  EnsembleSpec spec;
  spec.n_q = 16;
  spec.initial = InitialDistribution::discrete_gaussian;
  spec.sigma_s = 20.0;
  for (double kbar : {1.0, 3.0}) {
    const double phi = 3.4;
    const auto e = run_ensemble(spec, ScaledParams(kbar, phi, 3), IntensitySpread::none(), {0}).energy;
    for (int n = 1; n <= 3; ++n)
      CHECK_THAT(e[n] - e[0], WithinAbs(energy_after_kicks(n, phi, kbar, 0.0).value, 1e-3 * phi * phi));
  }
}

TEST_CASE("truncation errors propagate") {
  EnsembleSpec spec;
  spec.n_q = 4;
  spec.n_max = 5;
  CHECK_THROWS_AS(run_ensemble(spec, ScaledParams(1.0, 6.0, 3), IntensitySpread::none()), TruncationError);
  spec.n_max = -1;
  CHECK_THROWS_AS(run_ensemble(spec, ScaledParams(1.0, 6.0, 3), IntensitySpread::none()), DomainError);
}
