#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <vector>

#include "nhlattice/errors.hpp"
#include "nhlattice/spectral.hpp"
#include "support/oracles.hpp"

using namespace nhl;
using nhl::testing::C;

namespace {

LatticeSpec chain(int sites, C k1, double force = 0.0) {
  LatticeSpec s;
  s.geometry = Geometry::FiniteChain;
  s.sites = sites;
  s.kappa1 = k1;
  s.force = force;
  return s;
}

LatticeSpec ring(int sites, C k1, C k2 = {}) {
  LatticeSpec s;
  s.geometry = Geometry::Ring;
  s.sites = sites;
  s.kappa1 = k1;
  s.kappa2 = k2;
  return s;
}

// Every expected value has a distinct partner within tol.
bool same_multiset(std::vector<C> got, std::vector<C> expected, double tol) {
  if (got.size() != expected.size()) return false;
  for (C e : expected) {
    auto it = std::min_element(got.begin(), got.end(),
                               [e](C a, C b) { return std::abs(a - e) < std::abs(b - e); });
    if (std::abs(*it - e) > tol) return false;
    got.erase(it);
  }
  return true;
}

}  // namespace

TEST_CASE("Bloch dispersion samples") {
  const std::vector<double> q{0.0, std::numbers::pi / 2};
  const auto unit = bloch_dispersion(1.0, q);
  CHECK(std::abs(unit[0].energy - C(1.0)) < 1e-15);
  CHECK(std::abs(unit[1].energy - C(0.0, 1.0)) < 1e-15);
  const auto imag = bloch_dispersion(C(0.0, 2.0), std::vector<double>{std::numbers::pi / 2});
  CHECK(std::abs(imag[0].energy - C(-2.0)) < 1e-15);
  CHECK_THROWS_AS(bloch_dispersion(1.0, std::vector<double>{std::numbers::pi}), ParameterError);
}

TEST_CASE("ring spectrum: four sites sit on the unit circle") {
  const auto r = ring_spectrum(ring(4, 1.0));
  CHECK(same_multiset(r.eigenvalues, {1.0, C(0, 1), -1.0, C(0, -1)}, 1e-14));
  CHECK_FALSE(r.is_defective);
  CHECK(r.clusters.size() == 4);
}

TEST_CASE("ring spectrum: two and three sites") {
  const C kappa(0.4, 0.9);
  CHECK(same_multiset(ring_spectrum(ring(2, kappa)).eigenvalues, {kappa, -kappa}, 1e-14));
  const double third = 2.0 * std::numbers::pi / 3.0;
  CHECK(same_multiset(ring_spectrum(ring(3, 1.0)).eigenvalues,
                      {1.0, std::polar(1.0, third), std::polar(1.0, 2 * third)}, 1e-14));
}

TEST_CASE("ring spectrum eigenvectors are Bloch waves") {
  const auto spec = ring(6, C(0.7, -0.2));
  const auto r = ring_spectrum(spec);
  const auto h = build_hamiltonian(spec).entries;
  REQUIRE(r.eigenvectors);
  for (int k = 0; k < 6; ++k) {
    const Eigen::VectorXcd v = r.eigenvectors->col(k);
    CHECK((h * v - r.eigenvalues[k] * v).norm() < 1e-13);
  }
}

TEST_CASE("property: ring spectrum matches dense eigensolve") {
  auto g = nhl::testing::rng(3);
  for (int sites = 2; sites <= 14; ++sites) {
    const auto spec = ring(sites, nhl::testing::random_complex(g, 2.0));
    const auto analytic = ring_spectrum(spec);
    const auto dense = analyze_spectrum(build_hamiltonian(spec));
    CHECK(same_multiset(dense.eigenvalues, analytic.eigenvalues, 1e-10));
  }
}

TEST_CASE("ring spectrum preconditions") {
  CHECK_THROWS_AS(ring_spectrum(chain(4, 1.0)), ParameterError);
  auto forced = ring(4, 1.0);
  forced.force = 0.1;
  CHECK_THROWS_AS(ring_spectrum(forced), ParameterError);
}

TEST_CASE("truncated free chain: single EP of order sites") {
  const auto r = analyze_spectrum(build_hamiltonian(chain(4, 1.0)));
  REQUIRE(r.clusters.size() == 1);
  const auto& c = r.clusters[0];
  CHECK(std::abs(c.value) == 0.0);
  CHECK(c.multiplicity == 4);
  CHECK(c.jordan_blocks == std::vector<int>{4});
  CHECK(c.ep_order == 4);
  CHECK(c.rank_sequence == std::vector<int>{4, 3, 2, 1, 0, 0});
  CHECK(r.is_defective);
  CHECK_FALSE(r.eigenvectors.has_value());
  CHECK(c.perturbation_radius > 0.0);
}

TEST_CASE("forced chain: simple ladder eigenvalues") {
  const auto r = analyze_spectrum(build_hamiltonian(chain(4, 1.0, 0.7)));
  CHECK(same_multiset(r.eigenvalues, {0.0, 0.7, 1.4, 2.1}, 1e-12));
  CHECK_FALSE(r.is_defective);
  CHECK(r.clusters.size() == 4);
  CHECK(r.eigenvectors.has_value());
}

TEST_CASE("identity: degenerate but diagonalizable") {
  HamiltonianMatrix h{0, Eigen::MatrixXcd::Identity(3, 3)};
  const auto r = analyze_spectrum(h);
  REQUIRE(r.clusters.size() == 1);
  CHECK(r.clusters[0].value == C(1.0));
  CHECK(r.clusters[0].jordan_blocks == std::vector<int>{1, 1, 1});
  CHECK(r.clusters[0].ep_order == 1);
  CHECK_FALSE(r.is_defective);
}

TEST_CASE("mixed Jordan structure: blocks 3 + 1 at one eigenvalue, simple elsewhere") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(5, 5);
  m(0, 1) = 1.0;
  m(1, 2) = 1.0;
  m(4, 4) = 2.0;
  const auto r = analyze_spectrum({0, m});
  REQUIRE(r.clusters.size() == 2);
  CHECK(r.clusters[0].jordan_blocks == std::vector<int>{3, 1});
  CHECK(r.clusters[0].ep_order == 3);
  CHECK(r.clusters[1].multiplicity == 1);
}

TEST_CASE("similarity-transformed EP needs the looser tolerances") {
  Eigen::MatrixXcd j(2, 2);
  j << 0.5, 1.0, 0.0, 0.5;
  Eigen::MatrixXcd s(2, 2);
  s << 1.0, 0.3, C(0.2, 0.1), 1.1;
  const Eigen::MatrixXcd a = s * j * s.inverse();
  SpectrumOptions opt;
  opt.cluster_tol = 1e-6;
  opt.rank_tol = 1e-6;
  const auto r = analyze_spectrum({0, a}, opt);
  REQUIRE(r.clusters.size() == 1);
  CHECK(std::abs(r.clusters[0].value - C(0.5)) < 1e-6);
  CHECK(r.clusters[0].ep_order == 2);
}

TEST_CASE("rank decisions near the threshold are flagged") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 1) = 1.0;
  m(1, 2) = 3e-15;
  const auto r = analyze_spectrum({0, m});
  REQUIRE(r.clusters.size() == 1);
  CHECK(r.clusters[0].rank_ambiguous);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("analyze_spectrum rejects bad options") {
  SpectrumOptions opt;
  opt.cluster_tol = 0.0;
  CHECK_THROWS_AS(analyze_spectrum(build_hamiltonian(chain(3, 1.0)), opt), ParameterError);
}

TEST_CASE("property: EP order equals sites for the free truncated chain") {
  for (int sites = 2; sites <= 12; ++sites) {
    const auto r = analyze_spectrum(build_hamiltonian(chain(sites, 1.0)));
    REQUIRE(r.clusters.size() == 1);
    CHECK(r.clusters[0].ep_order == sites);
    CHECK(r.clusters[0].multiplicity == sites);
  }
}

TEST_CASE("property: forced truncated chain has the real ladder lF") {
  auto g = nhl::testing::rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int sites = 2 + trial % 15;
    const double f = nhl::testing::uniform(g, 0.2, 1.5) * (trial % 2 ? 1.0 : -1.0);
    const C k1 = nhl::testing::random_complex(g, 2.0);
    const auto h = build_hamiltonian(chain(sites, k1, f));
    const auto r = analyze_spectrum(h);
    std::vector<C> ladder;
    for (int l = 0; l < sites; ++l) ladder.push_back(f * l);
    const double norm_h = h.entries.norm();
    CHECK(same_multiset(r.eigenvalues, ladder, 1e-10 * norm_h));
    for (C e : r.eigenvalues) CHECK(std::abs(e.imag()) <= 1e-10 * norm_h);
  }
}

TEST_CASE("Wannier-Stark amplitudes: finite chain") {
  const auto states = wannier_stark_states(chain(5, 1.0, 1.0), std::vector<long>{2, 0});
  const auto& s = states[0];
  CHECK(s.energy == C(2.0));
  CHECK(std::abs(s.amplitudes.at(2) - 1.0) < 1e-15);
  CHECK(std::abs(s.amplitudes.at(1) - 1.0) < 1e-15);
  CHECK(std::abs(s.amplitudes.at(0) - 0.5) < 1e-15);
  CHECK(s.amplitudes.at(3) == C(0.0));
  CHECK(s.tail_weight == 0.0);
  CHECK(states[1].amplitudes.amps.squaredNorm() == doctest::Approx(1.0));
  CHECK(states[1].amplitudes.at(0) == C(1.0));
}

TEST_CASE("Wannier-Stark amplitudes: infinite chain below the ladder site") {
  LatticeSpec s;
  s.geometry = Geometry::InfiniteChain;
  s.window = {-10, 4};
  s.kappa1 = 2.0;
  s.force = 1.0;
  const auto st = wannier_stark_states(s, std::vector<long>{0})[0];
  CHECK(std::abs(st.amplitudes.at(0) - 1.0) < 1e-15);
  CHECK(std::abs(st.amplitudes.at(-1) - 2.0) < 1e-15);
  CHECK(std::abs(st.amplitudes.at(-2) - 2.0) < 1e-15);
  CHECK(std::abs(st.amplitudes.at(-3) - 4.0 / 3.0) < 1e-15);
  CHECK(st.amplitudes.at(1) == C(0.0));
  CHECK(st.tail_weight > 0.0);
  CHECK(st.tail_weight < 1e-6);
}

TEST_CASE("Wannier-Stark preconditions") {
  CHECK_THROWS_AS(wannier_stark_states(chain(4, 1.0, 0.0), std::vector<long>{1}), ParameterError);
  CHECK_THROWS_AS(wannier_stark_states(chain(4, 1.0, 0.5), std::vector<long>{4}), ParameterError);
  auto bidir = chain(4, 1.0, 0.5);
  bidir.kappa2 = 0.3;
  CHECK_THROWS_AS(wannier_stark_states(bidir, std::vector<long>{1}), ParameterError);
}

TEST_CASE("property: Wannier-Stark eigen-residuals") {
  auto g = nhl::testing::rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const int sites = 3 + trial % 14;
    const double f = nhl::testing::uniform(g, 0.3, 1.2) * (trial % 2 ? 1.0 : -1.0);
    const auto spec = chain(sites, nhl::testing::random_complex(g, 2.0), f);
    const auto h = build_hamiltonian(spec).entries;
    std::vector<long> ls(sites);
    for (int l = 0; l < sites; ++l) ls[l] = l;
    for (const auto& st : wannier_stark_states(spec, ls)) {
      const auto& a = st.amplitudes.amps;
      const double res = (h * a - st.energy * a).norm();
      CHECK(res <= 1e-10 * h.norm() * a.norm());
    }
  }

  LatticeSpec inf;
  inf.geometry = Geometry::InfiniteChain;
  inf.window = {-60, 10};
  inf.kappa1 = C(1.5, 0.5);
  inf.force = -0.7;
  const auto h = build_hamiltonian(inf).entries;
  for (const auto& st : wannier_stark_states(inf, std::vector<long>{-5, 0, 3, 10})) {
    const auto& a = st.amplitudes.amps;
    CHECK((h * a - st.energy * a).norm() <= 1e-10 * h.norm() * a.norm());
    CHECK(st.tail_weight < 1e-12 * a.squaredNorm());
  }
}

TEST_CASE("property: Wannier-Stark tails decay factorially") {
  for (double ratio : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    LatticeSpec s;
    s.geometry = Geometry::InfiniteChain;
    const long depth = static_cast<long>(20 + 4 * ratio);
    s.window = {-depth, 0};
    s.kappa1 = ratio;
    s.force = 1.0;
    const auto st = wannier_stark_states(s, std::vector<long>{0})[0];
    const double kept = st.amplitudes.amps.squaredNorm();
    CHECK(st.tail_weight < 1e-12 * (kept + st.tail_weight));

    // Independent oracle: direct sum of the squared series.
    double tail = 0.0;
    for (int k = static_cast<int>(depth) + 1; k < 170; ++k) {
      tail += std::pow(ratio, 2 * k) / std::pow(nhl::testing::factorial(k), 2);
    }
    CHECK(st.tail_weight == doctest::Approx(tail).epsilon(1e-10));
  }
}
