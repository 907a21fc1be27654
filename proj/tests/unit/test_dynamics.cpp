#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nhlattice/dynamics.hpp"
#include "nhlattice/errors.hpp"
#include "nhlattice/presets.hpp"
#include "support/oracles.hpp"

using namespace nhl;
using nhl::testing::C;

namespace {

LatticeSpec chain(int sites, C k1, C k2 = {}, double force = 0.0) {
  LatticeSpec s;
  s.geometry = Geometry::FiniteChain;
  s.sites = sites;
  s.kappa1 = k1;
  s.kappa2 = k2;
  s.force = force;
  return s;
}

EvolveConfig rk4_cfg(double t_end, double dt, int record_every = 1) {
  EvolveConfig c;
  c.t_end = t_end;
  c.dt = dt;
  c.record_every = record_every;
  return c;
}

double relative_error(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a - b).norm() / b.norm();
}

}  // namespace

TEST_CASE("free propagator entries") {
  CHECK(propagator_entry_unidirectional(1.0, 1.0, 0, 0) == C(1.0));
  CHECK(std::abs(propagator_entry_unidirectional(1.0, 1.0, -1, 0) - C(0, -1)) < 1e-15);
  CHECK(std::abs(propagator_entry_unidirectional(1.0, 1.0, -2, 0) - C(-0.5)) < 1e-15);
  CHECK(propagator_entry_unidirectional(1.0, 1.0, 1, 0) == C(0.0));
  // (-2i)^3 / 3! = 8i / 6
  CHECK(std::abs(propagator_entry_unidirectional(1.0, 2.0, 0, 3) - C(0.0, 4.0 / 3.0)) < 1e-15);
}

TEST_CASE("propagator at t = 0 is the identity") {
  for (long n = -3; n <= 3; ++n) {
    for (long l = -3; l <= 3; ++l) {
      CHECK(propagator_entry_unidirectional(C(0.4, 2.0), 0.0, n, l) == C(n == l ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("log-space propagator branch agrees with the direct series") {
  const C kappa(0.8, -0.3);
  const double t = 25.0;
  for (long k = 33; k <= 60; ++k) {
    const C z = C(0, -1) * kappa * t;
    C direct = 1.0;
    for (long j = 1; j <= k; ++j) direct *= z / static_cast<double>(j);
    CHECK(std::abs(propagator_entry_unidirectional(kappa, t, 0, k) - direct) <= 1e-12 * std::abs(direct));
  }
}

TEST_CASE("closed form: single-site excitation at the top of a four-site chain") {
  const auto spec = chain(4, 1.0);
  const auto traj = evolve_closed_form(spec, StateVector::site_excitation(spec, 3), std::vector<double>{1.0});
  const auto& c = traj.states[0];
  CHECK(std::abs(c.at(3) - C(1.0)) < 1e-15);
  CHECK(std::abs(c.at(2) - C(0, -1)) < 1e-15);
  CHECK(std::abs(c.at(1) - C(-0.5)) < 1e-15);
  CHECK(std::abs(c.at(0) - C(0, 1.0 / 6.0)) < 1e-15);
}

TEST_CASE("closed form: site 0 is the stationary E = 0 eigenvector") {
  const auto spec = chain(6, C(0.7, 0.4));
  const auto traj = evolve_closed_form(spec, StateVector::site_excitation(spec, 0),
                                       std::vector<double>{0.0, 1.0, 10.0, 100.0});
  for (const auto& s : traj.states) {
    CHECK(s.at(0) == C(1.0));
    CHECK(s.amps.tail(5).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("closed form: two-site ring oscillates as cos t, -i sin t") {
  LatticeSpec spec = chain(2, 1.0);
  spec.geometry = Geometry::Ring;
  const std::vector<double> times{0.3, 1.1, 2.7};
  const auto traj = evolve_closed_form(spec, StateVector::site_excitation(spec, 0), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(std::abs(traj.states[k].at(0) - std::cos(times[k])) < 1e-14);
    CHECK(std::abs(traj.states[k].at(1) - C(0, -std::sin(times[k]))) < 1e-14);
  }
}

TEST_CASE("closed form rejects forced or bidirectional lattices") {
  const auto forced = chain(4, 1.0, 0.0, 0.3);
  CHECK_THROWS_AS(evolve_closed_form(forced, StateVector::site_excitation(forced, 1), std::vector<double>{1.0}),
                  ParameterError);
  const auto bidir = chain(4, 1.0, 0.5);
  CHECK_THROWS_AS(evolve_closed_form(bidir, StateVector::site_excitation(bidir, 1), std::vector<double>{1.0}),
                  ParameterError);
}

TEST_CASE("closed form matches the dense propagator on all geometries") {
  auto g = nhl::testing::rng(21);
  for (Geometry geo : {Geometry::FiniteChain, Geometry::Ring, Geometry::InfiniteChain}) {
    LatticeSpec spec = chain(7, nhl::testing::random_complex(g));
    spec.geometry = geo;
    spec.window = {-5, 2};
    const auto c0 = StateVector::gaussian(spec, spec.first_site() + 3.0, 1.5);
    const double t = 2.0;
    const auto traj = evolve_closed_form(spec, c0, std::vector<double>{t});
    const Eigen::VectorXcd oracle =
        nhl::testing::taylor_propagator(build_hamiltonian(spec).entries, t) * c0.amps;
    CHECK(relative_error(traj.states[0].amps, oracle) < 1e-12);
  }
}

TEST_CASE("RK4 conserves the norm of a Hermitian chain") {
  const auto spec = chain(12, 1.0, 1.0);
  const auto c0 = StateVector::gaussian(spec, 5.0, 2.0);
  const auto traj = evolve_rk4(spec, c0, rk4_cfg(20.0, 0.01, 100));
  for (const auto& o : traj.observables) {
    CHECK(std::abs(o.total_weight - traj.observables[0].total_weight) < 1e-8 * traj.observables[0].total_weight);
  }
}

TEST_CASE("RK4 matches the closed form from the top site") {
  const auto spec = chain(8, 1.0);
  const auto c0 = StateVector::site_excitation(spec, 7);
  const auto traj = evolve_rk4(spec, c0, rk4_cfg(2.0, 1e-3, 500));
  const std::vector<double> times{0.5, 1.0, 1.5, 2.0};
  const auto exact = evolve_closed_form(spec, c0, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    REQUIRE(traj.times[k + 1] == doctest::Approx(times[k]));
    CHECK((traj.states[k + 1].amps - exact.states[k].amps).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("evolve with t_end = 0 returns the initial state only") {
  const auto spec = chain(4, 1.0);
  const auto c0 = StateVector::site_excitation(spec, 2);
  EvolveConfig cfg = rk4_cfg(0.0, 0.01);
  for (Method m : {Method::RK4, Method::ClosedForm}) {
    cfg.method = m;
    const auto traj = evolve(spec, c0, cfg);
    REQUIRE(traj.size() == 1);
    CHECK(traj.times[0] == 0.0);
    CHECK(traj.states[0].amps == c0.amps);
  }
}

TEST_CASE("evolve dispatch samples identical time grids") {
  const auto spec = chain(5, 1.0);
  const auto c0 = StateVector::site_excitation(spec, 4);
  EvolveConfig cfg = rk4_cfg(1.0, 0.003, 7);
  const auto a = evolve(spec, c0, cfg);
  cfg.method = Method::ClosedForm;
  const auto b = evolve(spec, c0, cfg);
  REQUIRE(a.times.size() == b.times.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.times[k] == b.times[k]);
    CHECK((a.states[k].amps - b.states[k].amps).norm() < 1e-8);
  }
}

TEST_CASE("RK4 configuration and step-size errors") {
  const auto spec = chain(4, 1.0);
  const auto c0 = StateVector::site_excitation(spec, 2);
  CHECK_THROWS_AS(evolve_rk4(spec, c0, rk4_cfg(1.0, 0.1)), ParameterError);
  CHECK_THROWS_AS(evolve_rk4(spec, c0, rk4_cfg(1.0, 0.0)), ParameterError);
  CHECK_THROWS_AS(evolve_rk4(spec, c0, rk4_cfg(0.01, 0.02)), ParameterError);
  CHECK_THROWS_AS(evolve_rk4(spec, c0, rk4_cfg(1.0, 0.01, 0)), ParameterError);
  CHECK_THROWS_AS(evolve_rk4(spec, StateVector::zeros(spec), rk4_cfg(1.0, 0.01)), ParameterError);
  CHECK_THROWS_AS(evolve_rk4(spec, c0, rk4_cfg(1.0, 0.01), 0.5), ParameterError);
}

TEST_CASE("secular growth overflows unless normalized") {
  LatticeSpec spec;
  spec.geometry = Geometry::InfiniteChain;
  spec.window = {-250, 0};
  spec.kappa1 = 1.0;
  const auto c0 = StateVector::site_excitation(spec, 0);
  CHECK_THROWS_AS(evolve_rk4(spec, c0, rk4_cfg(400.0, 0.05, 1000)), OverflowError);

  EvolveConfig cfg = rk4_cfg(400.0, 0.05, 1000);
  cfg.normalize = true;
  const auto traj = evolve_rk4(spec, c0, cfg);
  CHECK(traj.normalized());
  CHECK(traj.log_scale.back() > std::log(1e150));
  CHECK(traj.states.back().amps.norm() == doctest::Approx(1.0));
}

TEST_CASE("normalized and raw trajectories describe the same state") {
  const auto spec = chain(6, C(1.0, 0.3));
  const auto c0 = StateVector::gaussian(spec, 4.0, 1.0);
  const auto raw = evolve_rk4(spec, c0, rk4_cfg(3.0, 0.01, 50));
  EvolveConfig cfg = rk4_cfg(3.0, 0.01, 50);
  cfg.normalize = true;
  const auto norm = evolve_rk4(spec, c0, cfg);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    CHECK(relative_error(physical_state(norm, k).amps, raw.states[k].amps) < 1e-12);
    CHECK(norm.observables[k].revival_fidelity == doctest::Approx(raw.observables[k].revival_fidelity));
  }
}

TEST_CASE("center of mass") {
  StateVector point{5, Eigen::VectorXcd::Ones(1)};
  CHECK(center_of_mass(point) == 5.0);
  StateVector pair{0, Eigen::VectorXcd::Ones(2)};
  CHECK(center_of_mass(pair) == 0.5);
  StateVector tri{0, Eigen::VectorXcd(3)};
  tri.amps << 1.0, 2.0, 1.0;
  CHECK(center_of_mass(tri) == doctest::Approx(1.0));
  StateVector zero{0, Eigen::VectorXcd::Zero(3)};
  CHECK_THROWS_AS(center_of_mass(zero), UndefinedValueError);
}

TEST_CASE("revival error of a stationary eigenstate is |e^{-iE T} - 1|") {
  // Site 0 of the forced chain is an eigenstate with E = 0; a shifted ring
  // Bloch wave has E = kappa1 (real for real kappa1).
  LatticeSpec spec = chain(3, 1.0);
  spec.geometry = Geometry::Ring;
  StateVector bloch{0, Eigen::VectorXcd::Ones(3)};
  const double energy = 1.0;
  for (double period : {0.7, 2.0 * std::numbers::pi, 4.1}) {
    const auto traj = evolve_rk4(spec, bloch, rk4_cfg(period, 1e-3, 10));
    CHECK(std::abs(revival_error(traj, period) - std::abs(std::polar(1.0, -energy * period) - 1.0)) < 1e-9);
  }
}

TEST_CASE("revival error coverage checks") {
  const auto spec = chain(4, 1.0);
  const auto traj = evolve_rk4(spec, StateVector::site_excitation(spec, 3), rk4_cfg(1.0, 0.01, 10));
  CHECK_THROWS_AS(revival_error(traj, 2.0), ParameterError);
  CHECK_THROWS_AS(revival_error(traj, -1.0), ParameterError);
  CHECK_NOTHROW(revival_error(traj, 0.55));
}

TEST_CASE("unidirectional Bloch preset revives exactly; Hermitian preset does not") {
  const auto nh = bloch_preset(BlochVariant::Unidirectional);
  const auto herm = bloch_preset(BlochVariant::Hermitian);
  CHECK(nh.spec.sites == 16);
  CHECK(nh.spec.force == -0.6);
  CHECK(nh.spec.kappa2 == C(0.0));
  CHECK(herm.spec.kappa2 == C(1.0));
  CHECK(nh.gaussian_center == 7.5);

  // Dense-matrix-exponential oracle for both variants.
  const auto u_nh = nhl::testing::dense_propagator(build_hamiltonian(nh.spec).entries, nh.period);
  CHECK((u_nh - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-8);
  const auto u_h = nhl::testing::dense_propagator(build_hamiltonian(herm.spec).entries, herm.period);
  const double oracle_herm = (u_h * herm.initial.amps - herm.initial.amps).norm() / herm.initial.amps.norm();
  CHECK(oracle_herm > 0.1);

  EvolveConfig cfg = nh.config;
  cfg.t_end = nh.period;
  CHECK(revival_error(evolve_rk4(nh.spec, nh.initial, cfg), nh.period) <= 1e-4);
  const double herm_rk4 = revival_error(evolve_rk4(herm.spec, herm.initial, cfg), herm.period);
  CHECK(herm_rk4 == doctest::Approx(oracle_herm).epsilon(1e-4));
}

TEST_CASE("property: RK4 keeps sites above the excitation exactly zero") {
  auto g = nhl::testing::rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int sites = 6 + trial;
    const long n0 = trial % (sites - 1);
    const auto spec = chain(sites, nhl::testing::random_complex(g), 0.0, nhl::testing::uniform(g, -0.5, 0.5));
    const auto traj = evolve_rk4(spec, StateVector::site_excitation(spec, n0), rk4_cfg(3.0, 0.002, 100));
    for (const auto& s : traj.states) {
      for (long n = n0 + 1; n < sites; ++n) CHECK(s.at(n) == C(0.0));
    }
  }
}

TEST_CASE("property: secular growth law on the infinite lattice") {
  LatticeSpec spec;
  spec.geometry = Geometry::InfiniteChain;
  spec.window = {-14, 2};
  spec.kappa1 = C(0.6, 0.8);
  const auto c0 = StateVector::site_excitation(spec, 0);
  const auto traj = evolve_rk4(spec, c0, rk4_cfg(3.0, 1e-3, 500));
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double t = traj.times[k];
    for (int n = 0; n <= 10; ++n) {
      const double expected = std::pow(std::abs(spec.kappa1) * t, n) / nhl::testing::factorial(n);
      CHECK(std::abs(std::abs(traj.states[k].at(-n)) - expected) <= 1e-6 * expected);
    }
  }
}

TEST_CASE("property: RK4 convergence is fourth order") {
  const auto spec = chain(6, C(1.0, 0.5));
  const auto c0 = StateVector::gaussian(spec, 3.0, 1.5);
  const double t_end = 4.0;
  const auto exact = evolve_closed_form(spec, c0, std::vector<double>{t_end}).states[0].amps;
  const auto coarse = evolve_rk4(spec, c0, rk4_cfg(t_end, 0.04, 1000)).states.back().amps;
  const auto fine = evolve_rk4(spec, c0, rk4_cfg(t_end, 0.02, 1000)).states.back().amps;
  const double ratio = (coarse - exact).norm() / (fine - exact).norm();
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("state_at interpolates linearly between records") {
  StateTrajectory traj;
  traj.times = {0.0, 1.0};
  traj.states = {StateVector{0, Eigen::VectorXcd::Zero(1)}, StateVector{0, Eigen::VectorXcd::Ones(1) * 2.0}};
  CHECK(state_at(traj, 0.25).amps(0) == C(0.5));
  CHECK_THROWS_AS(state_at(traj, 1.5), ParameterError);
}

TEST_CASE("center-of-mass drift over one period") {
  // Two-site Hermitian ring: c(t) = (cos t, -i sin t), so <n>(t) = sin^2 t has period pi.
  const auto spec = [] {
    LatticeSpec s = chain(2, 0.5, 0.5);
    s.geometry = Geometry::Ring;
    return s;
  }();
  const auto traj = evolve_rk4(spec, StateVector::site_excitation(spec, 0), rk4_cfg(2 * std::numbers::pi, 1e-3, 10));
  CHECK(center_of_mass_drift(traj, std::numbers::pi) < 1e-6);
  CHECK(center_of_mass_drift(traj, std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS_AS(center_of_mass_drift(traj, 10.0), ParameterError);
  CHECK_THROWS_AS(center_of_mass_drift(traj, 0.0), ParameterError);
}
