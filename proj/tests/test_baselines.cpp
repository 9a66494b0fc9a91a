#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccifc/baselines.hpp"
#include "ccifc/rate_terms.hpp"
#include "ccifc/region.hpp"
#include "ccifc/scenario.hpp"
#include "doctest.h"

using namespace ccifc;

TEST_CASE("single-user cap formula") {
  GaussianScenario s = figure_preset("fig6")->scenario;
  CHECK(interference_free_cap(s) ==
        doctest::Approx(1.4036774610288021).epsilon(1e-15));

  s.P2 = 3.0;
  s.N4 = 1.0;
  CHECK(interference_free_cap(s) == 1.0);

  s.P2 = 0.0;
  CHECK(interference_free_cap(s) == 0.0);

  s.P2 = 3.0;
  s.N4 = 4.0;
  s.h42 = 2.0;
  CHECK(interference_free_cap(s, true) == 1.0);  // gain 4, ratio 4*3/4 = 3
}

TEST_CASE("no-interference baseline collapses to the point-to-point corner") {
  // With both cross links absent, the baseline region is the rectangle of the
  // two isolated links; its frontier sits at the simultaneous corner.
  const GaussianScenario rect{6, 6, 1, 1.3, 0, 0, 1.1, 1, 1, 1};
  SweepOptions opt;
  opt.resolution = 4;
  const SweepResult r = hk_region(rect, opt);
  REQUIRE_FALSE(r.frontier.empty());
  const double r1max = theta(1.3 * 1.3 * 6.0);
  const double r2max = theta(1.1 * 1.1 * 6.0);
  CHECK(r.frontier.max_r1() == doctest::Approx(r1max).epsilon(1e-9));
  CHECK(r.frontier.max_r2() == doctest::Approx(r2max).epsilon(1e-9));
  // The full corner is achieved: r2 stays at its cap all the way out.
  CHECK(r.frontier.max_r2_at(r1max - 1e-9) ==
        doctest::Approx(r2max).epsilon(1e-6));
}

TEST_CASE("baseline region ignores the cooperation link entirely") {
  GaussianScenario s = figure_preset("fig6")->scenario;
  SweepOptions opt;
  opt.resolution = 4;

  std::vector<RatePoint> reference;
  bool first = true;
  for (const double h21 : {1.0, 4.0}) {
    for (const double n2 : {0.01, 1.0, 100.0}) {
      s.h21 = h21;
      s.N2 = n2;
      const SweepResult r = hk_region(s, opt);
      REQUIRE_FALSE(r.frontier.empty());
      if (first) {
        reference = r.frontier.points;
        first = false;
        continue;
      }
      REQUIRE(r.frontier.points.size() == reference.size());
      for (size_t i = 0; i < reference.size(); ++i) {
        CHECK(r.frontier.points[i].r1 == reference[i].r1);
        CHECK(r.frontier.points[i].r2 == reference[i].r2);
      }
    }
  }
}

TEST_CASE("baseline is a restriction of the classical sweep") {
  const GaussianScenario s = figure_preset("fig6")->scenario;
  SweepOptions opt;
  opt.resolution = 4;
  const SweepResult hk = hk_region(s, opt);
  const SweepResult full = sweep_frontier(s, Strategy::Classical, opt);
  CHECK(frontier_dominates(full.frontier, hk.frontier, 1e-12));
}

TEST_CASE("outer bound degenerates to one user when receiver 4 is cut off") {
  GaussianScenario s{6, 6, 1, 1.3, 0, 0, 0, 1, 1, 1};
  const Frontier f = mimo_bc_outer(s);
  REQUIRE(f.points.size() == 1);
  CHECK(f.points[0].r1 ==
        doctest::Approx(theta(1.3 * 1.3 * 12.0)).epsilon(1e-9));
  CHECK(f.points[0].r2 == 0.0);
}

TEST_CASE("outer bound of the zero-power scenario is the origin") {
  GaussianScenario s{0, 0, 1, 1.3, 0.7, 1.5, 1.1, 1, 1, 1};
  const Frontier f = mimo_bc_outer(s);
  REQUIRE(f.points.size() == 1);
  CHECK(f.points[0].r1 == 0.0);
  CHECK(f.points[0].r2 == 0.0);
}

TEST_CASE("outer bound clips the second rate at the single-user cap") {
  // A strong direct gain at receiver 4 would let the sum-power relaxation
  // exceed what user 2 alone can ever achieve; the cap trims it.
  const GaussianScenario s{6, 6, 1, 1, 1, 1, 2, 1, 1, 1};
  OuterOptions opt;
  opt.split_resolution = 7;
  opt.rho_resolution = 9;
  const Frontier plain = mimo_bc_outer(s, opt);
  CHECK(plain.max_r2() ==
        doctest::Approx(interference_free_cap(s)).epsilon(1e-12));
  opt.cap_with_gain = true;
  const Frontier gained = mimo_bc_outer(s, opt);
  CHECK(gained.max_r2() ==
        doctest::Approx(interference_free_cap(s, true)).epsilon(1e-12));
  CHECK(gained.max_r2() > plain.max_r2());
}

TEST_CASE("outer bound stays below the full-cooperation ceiling") {
  for (const char* name : {"fig6", "fig7"}) {
    const GaussianScenario s = figure_preset(name)->scenario;
    OuterOptions opt;
    opt.split_resolution = 7;
    opt.rho_resolution = 9;
    const Frontier f = mimo_bc_outer(s, opt);
    const double cap =
        theta((s.h31 * s.h31 + s.h32 * s.h32) * (s.P1 + s.P2) / s.N3);
    CHECK(f.max_r1() <= cap + 1e-9);
  }
}

TEST_CASE("outer bound contains the achievable and baseline regions") {
  GaussianScenario s = figure_preset("fig7")->scenario;
  for (const double h21 : {1.0, 4.0}) {
    s.h21 = h21;
    const Frontier outer = mimo_bc_outer(s);
    SweepOptions opt;
    opt.resolution = 4;
    const SweepResult classical = sweep_frontier(s, Strategy::Classical, opt);
    const SweepResult hk = hk_region(s, opt);
    CAPTURE(h21);
    CHECK(frontier_dominates(outer, classical.frontier, 1e-6));
    CHECK(frontier_dominates(outer, hk.frontier, 1e-6));
  }
}

TEST_CASE("outer bound rejects nonsense inputs") {
  const GaussianScenario s = figure_preset("fig6")->scenario;
  OuterOptions opt;
  opt.split_resolution = 1;
  CHECK_THROWS_AS(mimo_bc_outer(s, opt), std::invalid_argument);
  GaussianScenario bad = s;
  bad.N3 = 0.0;
  CHECK_THROWS_AS(mimo_bc_outer(bad), std::invalid_argument);
}
