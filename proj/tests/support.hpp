#ifndef DSR_TESTS_SUPPORT_HPP
#define DSR_TESTS_SUPPORT_HPP

#include <set>
#include <string>
#include <vector>

#include "dsr/builder.hpp"
#include "dsr/feeder.hpp"
#include "dsr/graph.hpp"
#include "dsr/rng.hpp"

namespace dsr_test {

// Root 0 --(in-service line)-- load bus 1 --(switch)-- black-start bus 2.
inline std::string toy3_json() {
  return R"({
    "base_kva": 1000, "base_kv": 4.8, "v0": 1.0, "lambda": 0.001,
    "buses": [
      {"id": 0, "name": "0", "kind": "root", "p_min": -1000, "p_max": 1000,
       "q_min": -1000, "q_max": 1000, "v_min": 1.0, "v_max": 1.0},
      {"id": 1, "name": "1", "kind": "load_fixed", "p_min": -50, "p_max": -50,
       "q_min": -20, "q_max": -20, "v_min": 0.9409, "v_max": 1.0609},
      {"id": 2, "name": "2", "kind": "gen_black_start", "p_min": 0, "p_max": 80,
       "q_min": -38.7, "q_max": 38.7, "v_min": 0.9409, "v_max": 1.0609,
       "rating": 80}
    ],
    "edges": [
      {"id": 0, "from": 0, "to": 1, "kind": "in_service", "r": 0.01, "x": 0.02,
       "P_max": 1000, "Q_max": 1000},
      {"id": 1, "from": 1, "to": 2, "kind": "switch", "r": 0.01, "x": 0.02,
       "P_max": 1000, "Q_max": 1000, "normally_closed": true}
    ]
  })";
}

inline dsr::Feeder toy3() { return dsr::load_feeder(toy3_json()); }

inline dsr::MilpModel build_full(const dsr::Feeder& f,
                                 const dsr::OutageScenario& sc,
                                 bool tight = false) {
  dsr::BuildOptions opts;
  opts.tight_flows = tight;
  return dsr::build(f, sc, dsr::enumerate_cycles(f),
                    dsr::enumerate_nbs_paths(f), dsr::enumerate_bs_paths(f),
                    opts);
}

// Small random but structurally valid feeder: a tree of lines and switches
// with up to two tie switches, a mix of load, generator and junction buses.
inline dsr::Feeder random_toy_feeder(dsr::CounterRng& rng) {
  const int n = 4 + static_cast<int>(rng.below(4));
  dsr::Feeder f;
  f.base_kva = 1000;
  f.base_kv = 4.8;
  f.v0 = 1.0;
  f.lambda = 1e-3;
  for (int i = 0; i < n; ++i) {
    dsr::Bus b;
    b.id = i;
    b.name = std::to_string(i);
    b.v_min = 0.9409;
    b.v_max = 1.0609;
    if (i == 0) {
      b.kind = dsr::BusKind::Root;
      b.v_min = b.v_max = 1.0;
      b.p_min = -1e4;
      b.p_max = 1e4;
      b.q_min = -1e4;
      b.q_max = 1e4;
      f.buses.push_back(b);
      continue;
    }
    const double roll = rng.uniform();
    if (roll < 0.25) {
      b.kind = dsr::BusKind::Junction;
    } else if (roll < 0.60) {
      b.kind = dsr::BusKind::LoadFixed;
      const double p = 10 + 50 * rng.uniform();
      b.p_min = b.p_max = -p;
      b.q_min = b.q_max = -0.4 * p;
    } else if (roll < 0.75) {
      b.kind = dsr::BusKind::LoadElastic;
      const double p = 10 + 50 * rng.uniform();
      b.p_min = -p;
      b.p_max = -p / 2;
      b.q_min = -0.4 * p;
      b.q_max = -0.2 * p;
    } else if (roll < 0.90) {
      b.kind = dsr::BusKind::GenBlackStart;
      b.rating = 40 + 100 * rng.uniform();
      b.p_min = 0;
      b.p_max = b.rating;
      b.q_max = 0.484 * b.rating;
      b.q_min = -b.q_max;
    } else {
      b.kind = dsr::BusKind::GenNonBlackStart;
      b.rating = 10 + 30 * rng.uniform();
      b.p_min = 0;
      b.p_max = b.rating;
    }
    f.buses.push_back(b);
  }
  int edge_id = 0;
  auto add_edge = [&](int a, int b, dsr::EdgeKind kind, bool closed) {
    dsr::Edge e;
    e.id = edge_id++;
    e.name = std::to_string(e.id);
    e.from = a;
    e.to = b;
    e.kind = kind;
    e.r = 0.001 + 0.006 * rng.uniform();
    e.x = 0.001 + 0.006 * rng.uniform();
    e.P_max = 1000;
    e.P_min = -1000;
    e.Q_max = 1000;
    e.Q_min = -1000;
    e.normally_closed = closed;
    f.edges.push_back(e);
  };
  for (int i = 1; i < n; ++i) {
    const bool sw = rng.uniform() < 0.3;
    add_edge(static_cast<int>(rng.below(i)), i,
             sw ? dsr::EdgeKind::Switch : dsr::EdgeKind::InService,
             !sw || rng.uniform() < 0.7);
  }
  const int ties = static_cast<int>(rng.below(3));
  for (int t = 0; t < ties; ++t) {
    const int a = static_cast<int>(rng.below(n));
    int b = static_cast<int>(rng.below(n));
    if (a == b) b = (a + 1) % n;
    add_edge(a, b, dsr::EdgeKind::Switch, rng.uniform() < 0.3);
  }
  return dsr::load_feeder(dsr::serialize(f));  // enforce invariants
}

// Random toy scenario: up to two failed lines, sampled solar availability.
inline dsr::OutageScenario random_toy_scenario(const dsr::Feeder& f,
                                               dsr::CounterRng& rng) {
  std::vector<int> lines;
  for (const dsr::Edge& e : f.edges)
    if (e.kind == dsr::EdgeKind::InService) lines.push_back(e.id);
  std::set<int> failed;
  const int k = static_cast<int>(rng.below(3));
  for (int i = 0; i < k && !lines.empty(); ++i)
    failed.insert(lines[rng.below(lines.size())]);
  dsr::OutageScenario sc = dsr::derive_post_outage(f, failed);
  for (int bus : f.nbs_buses())
    sc.solar_avail[bus] = rng.uniform() * f.buses[bus].rating;
  return sc;
}

}  // namespace dsr_test

#endif
