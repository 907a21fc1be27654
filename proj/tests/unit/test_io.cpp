#include <doctest.h>

#include <sstream>

#include "nhlattice/errors.hpp"
#include "nhlattice/io.hpp"
#include "support/oracles.hpp"

using namespace nhl;
using nhl::testing::C;

TEST_CASE("complex literals") {
  CHECK(parse_complex("1") == C(1.0, 0.0));
  CHECK(parse_complex("3+0.7i") == C(3.0, 0.7));
  CHECK(parse_complex("3-0.7i") == C(3.0, -0.7));
  CHECK(parse_complex("-2.5i") == C(0.0, -2.5));
  CHECK(parse_complex("i") == C(0.0, 1.0));
  CHECK(parse_complex("-i") == C(0.0, -1.0));
  CHECK(parse_complex("1e-3+2E+1i") == C(1e-3, 20.0));
  CHECK(parse_complex(" 0.5 - i ") == C(0.5, -1.0));
  CHECK(parse_complex("1-1e-5j") == C(1.0, -1e-5));
  for (const char* bad : {"", "abc", "1+", "+", "1+2", "1+xi", "--1i", "1..2"}) {
    CHECK_THROWS_AS(parse_complex(bad), ParameterError);
  }
}

TEST_CASE("property: complex format and parse round-trip exactly") {
  auto g = nhl::testing::rng(5);
  for (int k = 0; k < 300; ++k) {
    const C z(nhl::testing::uniform(g, -1e3, 1e3) * std::pow(10.0, k % 7 - 3),
              nhl::testing::uniform(g, -1e3, 1e3) * std::pow(10.0, k % 5 - 2));
    CHECK(parse_complex(format_complex(z)) == z);
  }
  CHECK(parse_complex(format_complex(C(1.0, -0.0))) == C(1.0, 0.0));
}

TEST_CASE("json complex values are pairs") {
  Json j = C(1.5, -2.0);
  CHECK(j.dump() == "[1.5,-2.0]");
  CHECK(Json::parse("[0.25, 4]").get<C>() == C(0.25, 4.0));
  CHECK_THROWS_AS(Json::parse("\"1+2i\"").get<C>(), ParameterError);
  CHECK_THROWS_AS(Json::parse("[1,2,3]").get<C>(), ParameterError);
}

TEST_CASE("property: configuration objects round-trip through JSON text") {
  auto g = nhl::testing::rng(9);
  for (int k = 0; k < 50; ++k) {
    LatticeSpec s;
    s.geometry = static_cast<Geometry>(k % 3);
    s.sites = 1 + k;
    s.kappa1 = nhl::testing::random_complex(g, 3.0);
    s.kappa2 = nhl::testing::random_complex(g, 3.0);
    s.force = nhl::testing::uniform(g, -2, 2);
    s.window = {-k - 1, k};
    CHECK(Json::parse(Json(s).dump()).get<LatticeSpec>() == s);

    EvolveConfig c;
    c.t_end = nhl::testing::uniform(g, 0, 50);
    c.dt = nhl::testing::uniform(g, 1e-5, 1e-1);
    c.method = k % 2 ? Method::RK4 : Method::ClosedForm;
    c.record_every = 1 + k;
    c.normalize = k % 3 == 0;
    const auto c2 = Json::parse(Json(c).dump()).get<EvolveConfig>();
    CHECK(c2.t_end == c.t_end);
    CHECK(c2.dt == c.dt);
    CHECK(c2.method == c.method);
    CHECK(c2.record_every == c.record_every);
    CHECK(c2.normalize == c.normalize);

    ModulationProtocol p{nhl::testing::uniform(g, -3, 3), nhl::testing::uniform(g, -9, 9),
                         nhl::testing::uniform(g, -9, 9), 0.3, 1.1};
    const auto p2 = Json::parse(Json(p).dump()).get<ModulationProtocol>();
    CHECK(p2.theta == p.theta);
    CHECK(p2.alpha == p.alpha);
    CHECK(p2.beta == p.beta);

    LaserParams lp{0.1 * k, 0.2, 0.01, nhl::testing::uniform(g, 0, 1), 0.4, nhl::testing::uniform(g, -3, 3), -0.6};
    const auto lp2 = Json::parse(Json(lp).dump()).get<LaserParams>();
    CHECK(lp2.g == lp.g);
    CHECK(lp2.delta_am == lp.delta_am);
    CHECK(lp2.phi == lp.phi);
    CHECK(lp2.F == lp.F);
  }
}

TEST_CASE("partial lattice JSON falls back to defaults") {
  const auto s = Json::parse(R"({"geometry": "ring", "sites": 4, "kappa1": [1, 0]})").get<LatticeSpec>();
  CHECK(s.geometry == Geometry::Ring);
  CHECK(s.sites == 4);
  CHECK(s.kappa2 == C(0.0));
  CHECK_THROWS_AS(Json::parse(R"({"geometry": "mobius"})").get<LatticeSpec>(), ParameterError);
  CHECK_THROWS_AS(Json::parse(R"({"method": "euler"})").get<EvolveConfig>(), ParameterError);
}

TEST_CASE("csv writers") {
  LatticeSpec spec;
  spec.sites = 2;
  StateTrajectory traj;
  StateVector s{0, Eigen::VectorXcd(2)};
  s.amps << C(1.0, 0.0), C(0.0, -0.5);
  traj.times = {0.0, 0.25};
  traj.states = {s, s};
  traj.observables = {observe(s, s), observe(s, s)};

  std::ostringstream a;
  write_trajectory_csv(a, traj);
  CHECK(a.str() == "t,site,re,im\n0,0,1,0\n0,1,0,-0.5\n0.25,0,1,0\n0.25,1,0,-0.5\n");

  std::ostringstream b;
  write_observables_csv(b, traj);
  CHECK(b.str() == "t,com,weight,revival\n0,0.20000000000000001,1.25,1\n0.25,0.20000000000000001,1.25,1\n");

  std::ostringstream c;
  write_rwa_csv(c, {RwaPoint{5.0, 1.25, 4, C(0, -0.4), C(0.001, 0), 0.125}});
  CHECK(c.str() == "ratio,period,periods,discrepancy,rho_re,rho_im,sigma_re,sigma_im\n"
                   "5,1.25,4,0.125,0,-0.40000000000000002,0.001,0\n");
}
