#include <set>

#include "doctest.h"
#include "dsr/builder.hpp"
#include "dsr/lp.hpp"
#include "dsr/rng.hpp"
#include "dsr/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dsr;

TEST_CASE("tap ratio table") {
  const std::vector<double> c = tap_ratio_table();
  REQUIRE(c.size() == 33);
  CHECK(c[16] == doctest::Approx(1.0));       // c_17, zero tap
  CHECK(c[32] == doctest::Approx(1.21));      // c_33 = 1.1^2
  CHECK(c[0] == doctest::Approx(0.81));       // c_1 = 0.9^2
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k] > c[k - 1]);
}

TEST_CASE("envelope pins z = b*y at binary endpoints") {
  // For b = 1 the rows admit exactly z = y; for b = 0 exactly z = 0.
  CounterRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const double lo = -5 + 4 * rng.uniform();
    const double hi = lo + 0.5 + 6 * rng.uniform();
    MilpModel m;
    const int b = m.add_var("b", 0, 1, VarKind::Binary);
    const int y = m.add_var("y", lo, hi, VarKind::Continuous);
    const int z = add_mccormick(m, b, y, "z", "t");
    CHECK(m.vars[z].lower == std::min(0.0, lo));
    CHECK(m.vars[z].upper == std::max(0.0, hi));
    const double yv = lo + (hi - lo) * rng.uniform();
    const double bv = rng.below(2) ? 1.0 : 0.0;
    auto feasible = [&](double zv) {
      for (const auto& row : m.rows) {
        double act = 0;
        for (auto [id, coef] : row.coeffs)
          act += coef * (id == b ? bv : id == y ? yv : zv);
        if (row.sense == Sense::LE && act > row.rhs + 1e-9) return false;
        if (row.sense == Sense::GE && act < row.rhs - 1e-9) return false;
      }
      return true;
    };
    CHECK(feasible(bv * yv));
    CHECK_FALSE(feasible(bv * yv + 0.37 * (hi - lo)));
    CHECK_FALSE(feasible(bv * yv - 0.41 * (hi - lo)));
  }
}

TEST_CASE("mccormick rejects unbounded input") {
  MilpModel m;
  const int b = m.add_var("b", 0, 1, VarKind::Binary);
  const int y = m.add_var("y", 0, std::numeric_limits<double>::infinity(),
                          VarKind::Continuous);
  CHECK_THROWS_WITH_AS(add_mccormick(m, b, y, "z", "t"),
                       doctest::Contains("unbounded"), Error);
}

TEST_CASE("toy model binary census matches the hand count") {
  // Hand enumeration for the 3-bus toy, no outage: statuses x0,x1,x2; edge
  // statuses y for the fixed line and the switch; one black-start path
  // indicator (2 -> root) and one mode bit. No taps, no deltas.
  const Feeder f = dsr_test::toy3();
  const OutageScenario sc = derive_post_outage(f, {});
  const MilpModel m = dsr_test::build_full(f, sc);
  CHECK(m.num_binary() == 7);
  // x fixed by x >= x0 = 1 everywhere; the switch, the path indicator and
  // the mode bit stay free.
  CHECK(m.free_binaries().size() == 3);

  const OutageScenario cut = derive_post_outage(f, {0});
  const MilpModel m2 = dsr_test::build_full(f, cut);
  CHECK(m2.num_binary() == 7);
  // x1, x2 now free; the 2->root path indicator is pinned to 0 because the
  // failed line sits on it; the switch and the mode bit stay free.
  CHECK(m2.free_binaries().size() == 4);
}

TEST_CASE("fixed-load no-switch feeder degenerates to an LP") {
  Feeder f = dsr_test::toy3();
  f.edges[1].kind = EdgeKind::InService;
  f.buses[2].kind = BusKind::LoadFixed;
  f.buses[2].p_min = f.buses[2].p_max = -10;
  f.buses[2].q_min = f.buses[2].q_max = -4;
  f.buses[2].rating = 0;
  f = load_feeder(serialize(f));  // re-verify invariants
  const OutageScenario sc = derive_post_outage(f, {});
  const MilpModel m = dsr_test::build_full(f, sc);
  CHECK(m.free_binaries().empty());
  const SolveReport report = solve_milp(m);
  CHECK(report.status == MilpStatus::Optimal);
  CHECK(report.nodes == 1);
  CHECK(report.objective == doctest::Approx(-60.0));
}

TEST_CASE("builtin model carries the documented combinatorial rows") {
  const Feeder f = builtin_ieee37();
  const OutageScenario sc = derive_post_outage(f, {});
  const MilpModel m = dsr_test::build_full(f, sc);
  int cycle_rows = 0, delta_rows = 0, eps_rows = 0;
  for (const auto& row : m.rows) {
    if (row.tag.rfind("8 ", 0) == 0) ++cycle_rows;
    if (row.tag.rfind("10b ", 0) == 0) ++delta_rows;
    if (row.tag.rfind("11", 0) == 0) ++eps_rows;
  }
  CHECK(cycle_rows == 2);
  CHECK(delta_rows == 21);
  CHECK(eps_rows == 2 * 8);
}

TEST_CASE("symbol table covers the paper families and nothing else") {
  const Feeder f = builtin_ieee37();
  const OutageScenario sc = derive_post_outage(f, {25});
  const MilpModel m = dsr_test::build_full(f, sc);
  const std::set<std::string> families = {"x", "y", "v", "p", "q", "P", "Q",
                                          "t", "z", "delta", "eps_path",
                                          "eps_mode", "s"};
  for (const Variable& var : m.vars) {
    const std::string family = var.name.substr(0, var.name.find('['));
    CHECK(families.count(family));
  }
  // and every family is realized on this feeder
  std::set<std::string> seen;
  for (const Variable& var : m.vars) seen.insert(var.name.substr(0, var.name.find('[')));
  CHECK(seen == families);
}

TEST_CASE("x >= x0 enters as lower bounds") {
  const Feeder f = dsr_test::toy3();
  const OutageScenario sc = derive_post_outage(f, {}, {{1, 0}});  // switch open
  const MilpModel m = dsr_test::build_full(f, sc);
  CHECK(m.vars[m.symbols.x[0]].lower == 1);
  CHECK(m.vars[m.symbols.x[1]].lower == 1);
  CHECK(m.vars[m.symbols.x[2]].lower == 0);
}

TEST_CASE("scenario solar availability overrides the bound and the gate row") {
  Feeder f = dsr_test::toy3();
  f.buses[1].kind = BusKind::GenNonBlackStart;
  f.buses[1].p_min = 0;
  f.buses[1].p_max = 30;
  f.buses[1].q_min = f.buses[1].q_max = 0;
  f.buses[1].rating = 30;
  OutageScenario sc = derive_post_outage(f, {});
  sc.solar_avail[1] = 12.5;
  const MilpModel m = dsr_test::build_full(f, sc);
  CHECK(m.vars[m.symbols.p[1]].upper == doctest::Approx(12.5));
  bool found = false;
  for (const auto& row : m.rows) {
    if (row.tag != "2c+ bus 1") continue;
    for (auto [id, coef] : row.coeffs)
      if (id == m.symbols.x[1]) {
        CHECK(coef == doctest::Approx(-12.5));
        found = true;
      }
  }
  CHECK(found);
}

TEST_CASE("failed edges must be open in the scenario") {
  const Feeder f = dsr_test::toy3();
  OutageScenario sc = derive_post_outage(f, {0});
  sc.y0[0] = 1;  // corrupt: failed edge marked live
  CHECK_THROWS_WITH_AS(dsr_test::build_full(f, sc),
                       doctest::Contains("listed as in service"), Error);
}

TEST_CASE("mismatched scenario shape is rejected") {
  const Feeder f = dsr_test::toy3();
  OutageScenario sc = derive_post_outage(f, {});
  sc.x0.pop_back();
  CHECK_THROWS_AS(dsr_test::build_full(f, sc), Error);
}

TEST_CASE("rebuilding yields a byte-identical model") {
  const Feeder f = builtin_ieee37();
  const OutageScenario sc = derive_post_outage(f, {24, 28});
  const MilpModel a = dsr_test::build_full(f, sc);
  const MilpModel b = dsr_test::build_full(f, sc);
  CHECK(a.dump() == b.dump());
}

TEST_CASE("drop rows: direct for fixed-closed, envelopes for switches, none for open") {
  const Feeder f = dsr_test::toy3();
  const OutageScenario sc = derive_post_outage(f, {});
  const MilpModel m = dsr_test::build_full(f, sc);
  int direct = 0, envelope = 0;
  for (const auto& row : m.rows) {
    if (row.tag.rfind("5 ", 0) == 0) ++direct;
    if (row.tag.rfind("1a", 0) == 0 || row.tag.rfind("1b", 0) == 0) ++envelope;
  }
  CHECK(direct == 2);        // one per closed edge, the switch one over aux
  CHECK(envelope == 4 * 4);  // four products, four rows each

  const OutageScenario cut = derive_post_outage(f, {1});
  const MilpModel m2 = dsr_test::build_full(f, cut);
  int drop_rows = 0;
  for (const auto& row : m2.rows)
    if (row.tag.rfind("5 ", 0) == 0 || row.tag.rfind("1a", 0) == 0 ||
        row.tag.rfind("1b", 0) == 0)
      ++drop_rows;
  CHECK(drop_rows == 1);  // only the in-service line keeps its drop row
}

TEST_CASE("tight flow mode removes two envelopes per switch, same optimum") {
  const Feeder f = builtin_ieee37();
  const OutageScenario sc = derive_post_outage(f, {24, 25, 28});
  const MilpModel full = dsr_test::build_full(f, sc, false);
  const MilpModel tight = dsr_test::build_full(f, sc, true);
  CHECK(tight.vars.size() == full.vars.size() - 2 * 5);
  const SolveReport a = solve_milp(full);
  const SolveReport b = solve_milp(tight);
  REQUIRE(a.status == MilpStatus::Optimal);
  REQUIRE(b.status == MilpStatus::Optimal);
  CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}
