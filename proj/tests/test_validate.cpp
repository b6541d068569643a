#include "doctest.h"
#include "dsr/graph.hpp"
#include "dsr/plan.hpp"
#include "dsr/solver.hpp"
#include "dsr/validate.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dsr;

namespace {

RestorationPlan solve_and_extract(const Feeder& f, const OutageScenario& sc,
                                  const MilpModel& m) {
  const SolveReport report = solve_milp(m);
  REQUIRE(report.status == MilpStatus::Optimal);
  return extract_plan(f, m, report);
}

}  // namespace

TEST_CASE("solved plans validate on random toys") {
  CounterRng rng(808);
  int checked = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const Feeder f = dsr_test::random_toy_feeder(rng);
    const OutageScenario sc = dsr_test::random_toy_scenario(f, rng);
    const MilpModel m = dsr_test::build_full(f, sc);
    const SolveReport report = solve_milp(m);
    if (report.status != MilpStatus::Optimal) continue;
    const RestorationPlan plan = extract_plan(f, m, report);
    const ValidationReport vr = validate(f, sc, plan);
    if (!vr.pass) INFO(vr.to_json());
    CHECK(vr.pass);
    ++checked;
  }
  CHECK(checked >= 15);
}

TEST_CASE("hand-built plan closing a full cycle fails radiality") {
  const Feeder f = builtin_ieee37();
  const OutageScenario sc = derive_post_outage(f, {});
  const MilpModel m = dsr_test::build_full(f, sc);
  RestorationPlan plan = solve_and_extract(f, sc, m);
  for (int pos : f.switch_positions()) plan.y[pos] = 1;  // close everything
  const ValidationReport vr = validate(f, sc, plan);
  CHECK_FALSE(vr.pass);
  bool radiality = false;
  for (const Violation& v : vr.violations) radiality |= v.check == "radiality";
  CHECK(radiality);
}

TEST_CASE("each semantic law is independently enforced") {
  const Feeder f = builtin_ieee37();
  const OutageScenario sc = derive_post_outage(f, {24, 25, 28});
  const MilpModel m = dsr_test::build_full(f, sc);
  const RestorationPlan base = solve_and_extract(f, sc, m);
  REQUIRE(validate(f, sc, base).pass);

  auto violated = [&](const RestorationPlan& p, const std::string& check) {
    const ValidationReport vr = validate(f, sc, p);
    if (vr.pass) return false;
    for (const Violation& v : vr.violations)
      if (v.check == check) return true;
    return false;
  };

  SUBCASE("bounds") {
    RestorationPlan p = base;
    p.v[5] = 2.0;
    CHECK(violated(p, "bounds"));
  }
  SUBCASE("balance") {
    RestorationPlan p = base;
    p.p[12] += 7.0;
    CHECK(violated(p, "balance"));
  }
  SUBCASE("voltage drop") {
    RestorationPlan p = base;
    const int bus = f.bus_index_by_name("713");
    p.v[bus] += 5e-4;
    CHECK(violated(p, "voltage_drop"));
  }
  SUBCASE("regulator law") {
    RestorationPlan p = base;
    p.taps[0] = p.taps.at(0) == 33 ? 1 : p.taps.at(0) + 1;
    CHECK(violated(p, "regulator"));
  }
  SUBCASE("status propagation") {
    RestorationPlan p = base;
    const int bus = f.bus_index_by_name("725");
    p.x[bus] = 1;  // energized island of one bus across an open边 boundary
    CHECK((violated(p, "status_propagation") || violated(p, "bounds") ||
           violated(p, "balance")));
  }
  SUBCASE("nbs reachability") {
    RestorationPlan p = base;
    // cut the solar bus 738 from its black-start source but keep x = 1
    const int pos737 = 31;  // edge 737-738
    REQUIRE(f.edges[pos737].name == "737-738");
    p.y[pos737] = 0;
    p.P[pos737] = p.Q[pos737] = 0;
    CHECK(violated(p, "nbs_reachability"));
  }
  SUBCASE("coordination: PQ where PV required") {
    RestorationPlan p = base;
    const int b710 = f.bus_index_by_name("710");
    p.modes[b710] = GenMode::PQ;
    CHECK(violated(p, "coordination"));
  }
  SUBCASE("no de-energization") {
    RestorationPlan p = base;
    const int bus = f.bus_index_by_name("712");
    p.x[bus] = 0;
    CHECK(violated(p, "no_deenergization"));
  }
  SUBCASE("objective audit") {
    RestorationPlan p = base;
    p.objective -= 1.0;
    CHECK(violated(p, "objective_audit"));
  }
}

TEST_CASE("three-line outage restores two islands with 710 as reference") {
  const Feeder f = builtin_ieee37();
  const OutageScenario sc = derive_post_outage(f, {24, 25, 28});
  const MilpModel m = dsr_test::build_full(f, sc);
  const RestorationPlan plan = solve_and_extract(f, sc, m);
  REQUIRE(validate(f, sc, plan).pass);

  const auto islands = energized_components(f, plan.x, plan.y);
  CHECK(islands.size() == 2);

  const int b710 = f.bus_index_by_name("710");
  const int b705 = f.bus_index_by_name("705");
  REQUIRE(plan.modes.count(b710));
  CHECK(plan.modes.at(b710) == GenMode::PV);
  CHECK(plan.v[b710] == doctest::Approx(f.v0));
  REQUIRE(plan.modes.count(b705));
  CHECK(plan.modes.at(b705) == GenMode::PQ);

  CHECK_FALSE(plan.x[f.bus_index_by_name("706")]);
  CHECK_FALSE(plan.x[f.bus_index_by_name("725")]);
  for (const Bus& b : f.buses)
    if (b.name != "706" && b.name != "725") CHECK(plan.x[b.id]);
}

TEST_CASE("malformed plan is distinct from a failed check") {
  const Feeder f = dsr_test::toy3();
  const OutageScenario sc = derive_post_outage(f, {});
  const MilpModel m = dsr_test::build_full(f, sc);
  SolveReport report = solve_milp(m);
  REQUIRE(report.status == MilpStatus::Optimal);
  report.values[m.symbols.x[1]] = 0.5;  // non-integral binary
  CHECK_THROWS_WITH_AS(extract_plan(f, m, report),
                       doctest::Contains("not integral"), Error);

  RestorationPlan shape = extract_plan(f, m, solve_milp(m));
  shape.v.pop_back();
  CHECK_THROWS_WITH_AS(validate(f, sc, shape), doctest::Contains("shape"), Error);
}

TEST_CASE("plan JSON round-trip preserves validation") {
  const Feeder f = builtin_ieee37();
  const OutageScenario sc = derive_post_outage(f, {24, 25, 28});
  const MilpModel m = dsr_test::build_full(f, sc);
  const RestorationPlan plan = solve_and_extract(f, sc, m);
  const RestorationPlan back = plan_from_json(f, plan_to_json(f, plan));
  CHECK(back.x == plan.x);
  CHECK(back.y == plan.y);
  CHECK(back.taps == plan.taps);
  CHECK(validate(f, sc, back).pass);
}
