#include <set>

#include "doctest.h"
#include "dsr/feeder.hpp"
#include "support.hpp"

using namespace dsr;

TEST_CASE("toy feeder loads with expected shape") {
  const Feeder f = dsr_test::toy3();
  CHECK(f.buses.size() == 3);
  CHECK(f.edges.size() == 2);
  CHECK(f.buses[0].kind == BusKind::Root);
  CHECK(f.buses[2].kind == BusKind::GenBlackStart);
  CHECK(f.edges[1].kind == EdgeKind::Switch);
}

TEST_CASE("duplicating a fixed-closed edge is a structural cycle") {
  std::string text = dsr_test::toy3_json();
  const std::string dup =
      R"(,{"id": 2, "from": 0, "to": 1, "kind": "in_service", "r": 0.01,
          "x": 0.02, "P_max": 1000, "Q_max": 1000})";
  text.insert(text.rfind(']') - 1, dup);
  CHECK_THROWS_WITH_AS(load_feeder(text),
                       doctest::Contains("structural cycle"), Error);
}

TEST_CASE("invariant violations are rejected with the entity named") {
  SUBCASE("load with positive p_max") {
    std::string text = dsr_test::toy3_json();
    auto at = text.find("\"p_max\": -50");
    text.replace(at, 12, "\"p_max\": 5");
    CHECK_THROWS_WITH_AS(load_feeder(text), doctest::Contains("bus 1"), Error);
  }
  SUBCASE("missing root") {
    std::string text = dsr_test::toy3_json();
    auto at = text.find("\"kind\": \"root\"");
    text.replace(at, 14, "\"kind\": \"junction\"");
    CHECK_THROWS_AS(load_feeder(text), Error);
  }
  SUBCASE("parse error carries context") {
    CHECK_THROWS_WITH_AS(load_feeder("{nope"), doctest::Contains("parse error"),
                         Error);
  }
  SUBCASE("non-ideal regulator") {
    std::string text = dsr_test::toy3_json();
    auto at = text.find("\"kind\": \"switch\"");
    text.replace(at, 16, "\"kind\": \"regulator\"");
    CHECK_THROWS_WITH_AS(load_feeder(text), doctest::Contains("ideal"), Error);
  }
}

TEST_CASE("builtin feeder matches the documented modification") {
  const Feeder f = builtin_ieee37();
  CHECK(f.buses.size() == 37);  // 36 non-root buses plus the root
  CHECK(f.buses[0].kind == BusKind::Root);
  CHECK(f.switch_positions().size() == 5);
  CHECK(f.regulator_positions().size() == 1);

  const int b705 = f.bus_index_by_name("705");
  const int b710 = f.bus_index_by_name("710");
  REQUIRE(b705 >= 0);
  REQUIRE(b710 >= 0);
  CHECK(f.buses[b710].rating > f.buses[b705].rating);
  CHECK(f.buses[b705].rating == doctest::Approx(459.3));
  CHECK(f.buses[b710].rating == doctest::Approx(918.5));

  CHECK(f.bs_buses() == std::vector<int>{b705, b710});
  const std::vector<int> nbs = f.nbs_buses();
  REQUIRE(nbs.size() == 3);
  CHECK(f.buses[nbs[0]].name == "718");
  CHECK(f.buses[nbs[1]].name == "730");
  CHECK(f.buses[nbs[2]].name == "738");
  for (int bus : nbs) {
    CHECK(f.buses[bus].q_min == 0);
    CHECK(f.buses[bus].q_max == 0);
  }
  // Solar capacity is half the replaced spot load.
  CHECK(f.buses[nbs[0]].p_max == doctest::Approx(42.5));
  CHECK(f.buses[nbs[2]].p_max == doctest::Approx(63.0));

  // Elastic loads down to half nominal.
  for (const char* name : {"701", "722", "737"}) {
    const Bus& b = f.buses[f.bus_index_by_name(name)];
    CHECK(b.kind == BusKind::LoadElastic);
    CHECK(b.p_max == doctest::Approx(b.p_min / 2));
  }
  CHECK(f.lambda == doctest::Approx(1e-3));
  for (const Bus& b : f.buses) {
    if (b.id == 0) continue;
    CHECK(b.v_min == doctest::Approx(0.9409));
    CHECK(b.v_max == doctest::Approx(1.0609));
  }

  // Normally open tie switches, normally closed sectionalizers.
  int open_ties = 0;
  for (int pos : f.switch_positions())
    if (!f.edges[pos].normally_closed) ++open_ties;
  CHECK(open_ties == 2);
}

TEST_CASE("builtin feeder round-trips through the file format") {
  const Feeder f = builtin_ieee37();
  const Feeder g = load_feeder(serialize(f));
  REQUIRE(g.buses.size() == f.buses.size());
  REQUIRE(g.edges.size() == f.edges.size());
  CHECK(serialize(g) == serialize(f));
}

TEST_CASE("derive_post_outage derives root connectivity") {
  const Feeder f = dsr_test::toy3();

  SUBCASE("line outage cuts everything downstream") {
    const OutageScenario sc = derive_post_outage(f, {0});
    CHECK(sc.x0 == std::vector<uint8_t>{1, 0, 0});
    CHECK(sc.y0[0] == 0);
    CHECK(sc.y0[1] == 1);
  }
  SUBCASE("open switch cuts only the generator bus") {
    const OutageScenario sc = derive_post_outage(f, {}, {{1, 0}});
    CHECK(sc.x0 == std::vector<uint8_t>{1, 1, 0});
  }
  SUBCASE("no outage energizes the whole radial feeder") {
    const OutageScenario sc = derive_post_outage(f, {});
    CHECK(sc.x0 == std::vector<uint8_t>{1, 1, 1});
  }
  SUBCASE("idempotent") {
    const OutageScenario a = derive_post_outage(f, {0}, {{1, 1}});
    const OutageScenario b = derive_post_outage(f, {0}, {{1, 1}});
    CHECK(a.x0 == b.x0);
    CHECK(a.y0 == b.y0);
  }
}

TEST_CASE("builtin default state is fully energized") {
  const Feeder f = builtin_ieee37();
  const OutageScenario sc = derive_post_outage(f, {});
  for (const Bus& b : f.buses) CHECK(sc.x0[b.id] == 1);
}

TEST_CASE("scenario file round-trip") {
  const Feeder f = builtin_ieee37();
  OutageScenario sc = derive_post_outage(f, {25, 28});
  sc.solar_avail[f.bus_index_by_name("718")] = 12.5;
  const OutageScenario back = load_scenario(f, serialize(f, sc));
  CHECK(back.failed_edges == sc.failed_edges);
  CHECK(back.x0 == sc.x0);
  CHECK(back.y0 == sc.y0);
  CHECK(back.solar_avail == sc.solar_avail);
}

TEST_CASE("scenario rejects out-of-range solar availability") {
  const Feeder f = builtin_ieee37();
  const int bus = f.bus_index_by_name("718");
  const std::string text = R"({"failed_edges": [], "solar_avail": {")" +
                           std::to_string(bus) + R"(": 99.0}})";
  CHECK_THROWS_WITH_AS(load_scenario(f, text), doctest::Contains("rated"), Error);
}
