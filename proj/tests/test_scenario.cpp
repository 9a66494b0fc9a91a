#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "ccifc/scenario.hpp"
#include "doctest.h"

using namespace ccifc;

namespace {

GaussianScenario fig6_scenario() {
  auto p = figure_preset("fig6");
  REQUIRE(p.has_value());
  return p->scenario;
}

}  // namespace

TEST_CASE("allocation validation accepts the all-zero split") {
  PowerAllocation a;
  CHECK(validate_allocation(a, fig6_scenario()).valid);
}

TEST_CASE("allocation validation rejects an oversubscribed transmitter-1 budget") {
  PowerAllocation a;
  a.bp1 = 0.6;
  a.b1 = 0.6;
  const Validity v = validate_allocation(a, fig6_scenario());
  CHECK_FALSE(v.valid);
  CHECK(v.violation.find("transmitter-1") != std::string::npos);
}

TEST_CASE("allocation validation rejects an oversubscribed transmitter-2 budget") {
  PowerAllocation a;
  a.g1 = 0.5;
  a.g2 = 0.4;
  a.g3 = 0.2;
  CHECK_FALSE(validate_allocation(a, fig6_scenario()).valid);
}

TEST_CASE("allocation validation rejects out-of-range and non-finite fractions") {
  const GaussianScenario s = fig6_scenario();
  PowerAllocation a;
  a.b3 = -0.1;
  CHECK_FALSE(validate_allocation(a, s).valid);
  a.b3 = 1.5;
  CHECK_FALSE(validate_allocation(a, s).valid);
  a.b3 = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(validate_allocation(a, s).valid);
  a.b3 = std::numeric_limits<double>::infinity();
  CHECK_FALSE(validate_allocation(a, s).valid);
}

TEST_CASE("lookahead allocations must silence the undecoded cooperative streams") {
  PowerAllocation a;
  a.strategy = Strategy::Lookahead;
  a.bp2 = 0.1;
  CHECK_FALSE(validate_allocation(a, fig6_scenario()).valid);
  a.bp2 = 0.0;
  a.b2 = 0.1;
  CHECK_FALSE(validate_allocation(a, fig6_scenario()).valid);
  a.b2 = 0.0;
  CHECK(validate_allocation(a, fig6_scenario()).valid);
}

TEST_CASE("relay power demand matches an independent transcription") {
  const GaussianScenario s = fig6_scenario();
  PowerAllocation a;
  a.strategy = Strategy::NoDelay;
  a.bp1 = 0.1;
  a.b1 = 0.2;
  a.bp2 = 0.05;
  a.b2 = 0.05;
  a.b3 = 0.2;
  a.b4 = 0.15;
  a.g1 = 0.25;
  a.g2 = 0.3;
  a.g3 = 0.4;
  const double beta = 0.37;
  const double coded = a.bp1 + a.b1 + a.bp2 + a.b2 + a.b3;
  const double coherent = s.h21 * beta * std::sqrt(a.b4 * s.P1) +
                          (1.0 - beta) * std::sqrt(a.g3 * s.P2);
  const double expected = s.h21 * s.h21 * beta * beta * coded * s.P1 +
                          coherent * coherent + beta * beta * s.N2 +
                          (1.0 - beta) * (1.0 - beta) * (a.g1 + a.g2) * s.P2;
  CHECK(relay_power_demand(s, a, beta) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("relay budget boundary is accepted exactly and breached just above") {
  const GaussianScenario s = fig6_scenario();
  PowerAllocation a;
  a.strategy = Strategy::NoDelay;
  a.bp1 = a.b1 = a.bp2 = a.b2 = 0.15;
  a.b3 = a.b4 = 0.2;
  a.g1 = a.g2 = a.g3 = 0.3;
  a.relay_beta = 1.0;
  const double demand = relay_power_demand(s, a, a.relay_beta);
  REQUIRE(demand > 0.0);
  a.relay_h = std::sqrt(s.P2 / demand);  // exactly exhausts the power budget
  CHECK(validate_allocation(a, s).valid);
  a.relay_h *= 1.001;
  CHECK_FALSE(validate_allocation(a, s).valid);
}

TEST_CASE("shrinking the relay gain keeps a valid allocation valid") {
  const GaussianScenario s = fig6_scenario();
  PowerAllocation a;
  a.strategy = Strategy::NoDelay;
  a.b3 = 0.4;
  a.g3 = 0.5;
  a.relay_beta = 0.6;
  a.relay_h = std::sqrt(s.P2 / relay_power_demand(s, a, a.relay_beta));
  REQUIRE(validate_allocation(a, s).valid);
  for (double shrink : {0.9, 0.5, 0.1, 0.01}) {
    PowerAllocation b = a;
    b.relay_h = a.relay_h * shrink;
    CHECK(validate_allocation(b, s).valid);
  }
}

TEST_CASE("validation is total on degenerate scenarios") {
  GaussianScenario s;  // all zeros: powers and noises degenerate
  PowerAllocation a;
  a.strategy = Strategy::NoDelay;
  a.relay_beta = 0.5;
  a.relay_h = 1.0;
  CHECK_NOTHROW(validate_allocation(a, s));
}

TEST_CASE("preset constants are frozen") {
  const double r055 = 0.7416198487095663;
  const double r15 = 1.224744871391589;
  const double r2 = 1.4142135623730951;
  const double r03 = 0.5477225575051661;

  SUBCASE("fig6 and fig8 share one parameter set") {
    for (const char* name : {"fig6", "fig8"}) {
      const auto p = figure_preset(name);
      REQUIRE(p.has_value());
      const GaussianScenario& s = p->scenario;
      CHECK(s.P1 == 6.0);
      CHECK(s.P2 == 6.0);
      CHECK(s.h21 == 1.0);
      CHECK(s.h31 == 1.0);
      CHECK(s.h32 == r055);
      CHECK(s.h41 == r055);
      CHECK(s.h42 == 1.0);
      CHECK(s.N2 == 1.0);
      CHECK(s.N3 == 1.0);
      CHECK(s.N4 == 1.0);
      CHECK(p->h21_values == std::vector<double>{1, 4});
      CHECK(p->n2_values.empty());
    }
  }
  SUBCASE("fig7 lowers the second transmit power") {
    const auto p = figure_preset("fig7");
    REQUIRE(p.has_value());
    CHECK(p->scenario.P1 == 6.0);
    CHECK(p->scenario.P2 == 1.5);
    CHECK(p->scenario.h32 == r055);
    CHECK(p->scenario.h41 == r055);
    CHECK(p->h21_values == std::vector<double>{1, 4});
  }
  SUBCASE("fig9 variants strengthen the cross gains") {
    const auto ps = figure_preset("fig9strong");
    REQUIRE(ps.has_value());
    CHECK(ps->scenario.h32 == r15);
    CHECK(ps->scenario.h41 == r15);
    const auto pm = figure_preset("fig9mixed");
    REQUIRE(pm.has_value());
    CHECK(pm->scenario.h32 == r055);
    CHECK(pm->scenario.h41 == r15);
  }
  SUBCASE("fig10 sweeps the overheard noise down to zero") {
    const auto p = figure_preset("fig10");
    REQUIRE(p.has_value());
    CHECK(p->scenario.h32 == r2);
    CHECK(p->scenario.h41 == r03);
    CHECK(p->h21_values == std::vector<double>{1});
    CHECK(p->n2_values == std::vector<double>{100, 10, 1, 0.1, 0});
  }
  SUBCASE("unknown names are rejected and the name list is complete") {
    CHECK_FALSE(figure_preset("fig11").has_value());
    CHECK_FALSE(figure_preset("").has_value());
    CHECK(preset_names() == std::vector<std::string>{"fig6", "fig7", "fig8",
                                                     "fig9strong", "fig9mixed",
                                                     "fig10"});
  }
}

TEST_CASE("scenario validation admits a noiseless overheard link only") {
  GaussianScenario s = fig6_scenario();
  s.N2 = 0.0;
  CHECK(validate_scenario(s).valid);
  s.N3 = 0.0;
  CHECK_FALSE(validate_scenario(s).valid);
  s = fig6_scenario();
  s.N4 = 0.0;
  CHECK_FALSE(validate_scenario(s).valid);
  s = fig6_scenario();
  s.P1 = -1.0;
  CHECK_FALSE(validate_scenario(s).valid);
  s = fig6_scenario();
  s.h31 = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(validate_scenario(s).valid);
}

TEST_CASE("scenario JSON round-trips exactly") {
  GaussianScenario s = fig6_scenario();
  s.h21 = 4.0;
  s.N2 = 0.25;
  const std::string text = scenario_to_json(s);
  std::string error;
  const auto back = scenario_from_json(text, &error);
  REQUIRE(back.has_value());
  CHECK(back->P1 == s.P1);
  CHECK(back->P2 == s.P2);
  CHECK(back->h21 == s.h21);
  CHECK(back->h31 == s.h31);
  CHECK(back->h32 == s.h32);
  CHECK(back->h41 == s.h41);
  CHECK(back->h42 == s.h42);
  CHECK(back->N2 == s.N2);
  CHECK(back->N3 == s.N3);
  CHECK(back->N4 == s.N4);
}

TEST_CASE("scenario JSON rejects malformed input with a reason") {
  std::string error;
  CHECK_FALSE(scenario_from_json("not json", &error).has_value());
  CHECK_FALSE(error.empty());
  error.clear();
  CHECK_FALSE(scenario_from_json(R"({"P1": 6})", &error).has_value());
  CHECK_FALSE(error.empty());
  // Structurally fine but physically invalid values are also rejected.
  CHECK_FALSE(scenario_from_json(
                  R"({"P1":6,"P2":6,"h21":1,"h31":1,"h32":1,"h41":1,"h42":1,
                      "N2":1,"N3":0,"N4":1})",
                  &error)
                  .has_value());
}

TEST_CASE("masks pin fractions and reject unknown keys") {
  PowerAllocation a;
  a.g3 = 0.7;
  a.b4 = 0.2;
  std::string error;
  CHECK(apply_masks(a, {{"g3", 0.0}, {"bp1", 0.25}}, &error));
  CHECK(a.g3 == 0.0);
  CHECK(a.bp1 == 0.25);
  CHECK(a.b4 == 0.2);  // untouched
  CHECK_FALSE(apply_masks(a, {{"beta9", 1.0}}, &error));
  CHECK(error.find("beta9") != std::string::npos);
  CHECK(is_valid_mask_key("relay_beta"));
  CHECK_FALSE(is_valid_mask_key("relay_h2"));
}

TEST_CASE("strategy names round-trip") {
  for (Strategy s :
       {Strategy::Classical, Strategy::NoDelay, Strategy::Lookahead}) {
    const auto back = strategy_from_name(strategy_name(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK_FALSE(strategy_from_name("sideways").has_value());
}
