#include "dsr/validate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "dsr/graph.hpp"
#include "json.hpp"

namespace dsr {

namespace {

struct Checker {
  const Feeder& f;
  const OutageScenario& sc;
  const RestorationPlan& plan;
  const double tol;
  ValidationReport report;
  std::vector<EdgeKind> ekind;  // failed edges reclassified out of service

  Checker(const Feeder& feeder, const OutageScenario& scenario,
          const RestorationPlan& p, double t)
      : f(feeder), sc(scenario), plan(p), tol(t) {
    if (plan.x.size() != f.buses.size() || plan.y.size() != f.edges.size() ||
        plan.v.size() != f.buses.size() || plan.p.size() != f.buses.size() ||
        plan.q.size() != f.buses.size() || plan.P.size() != f.edges.size() ||
        plan.Q.size() != f.edges.size())
      throw Error("malformed plan: shape does not match the feeder");
    ekind.resize(f.edges.size());
    for (std::size_t pos = 0; pos < f.edges.size(); ++pos)
      ekind[pos] = sc.failed_edges.count(f.edges[pos].id)
                       ? EdgeKind::OutOfService
                       : f.edges[pos].kind;
  }

  void flag(const std::string& check, const std::string& entity, double mag) {
    report.pass = false;
    report.violations.push_back({check, entity, mag});
  }

  void in_box(const std::string& check, const std::string& entity, double value,
              double lo, double hi, double gate) {
    // gate = 0 collapses the box to {0}.
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    const double lo_eff = gate * lo - tol * scale;
    const double hi_eff = gate * hi + tol * scale;
    if (value < lo_eff || value > hi_eff)
      flag(check, entity, std::max(lo_eff - value, value - hi_eff));
  }

  double solar_cap(int bus) const {
    auto it = sc.solar_avail.find(bus);
    return it != sc.solar_avail.end() ? it->second : f.buses[bus].p_max;
  }

  void check_bounds() {
    for (const Bus& b : f.buses) {
      const double gate = plan.x[b.id];
      const std::string at = "bus " + b.name;
      in_box("bounds", at + " v", plan.v[b.id], b.v_min, b.v_max, gate);
      const double pmax =
          b.kind == BusKind::GenNonBlackStart ? solar_cap(b.id) : b.p_max;
      in_box("bounds", at + " p", plan.p[b.id], b.p_min, pmax, gate);
      in_box("bounds", at + " q", plan.q[b.id], b.q_min, b.q_max, gate);
    }
    if (!plan.x[0]) flag("bounds", "bus " + f.buses[0].name + " x0", 1);
    for (std::size_t pos = 0; pos < f.edges.size(); ++pos) {
      const Edge& e = f.edges[pos];
      const std::string at = "edge " + e.name;
      if (ekind[pos] == EdgeKind::OutOfService && plan.y[pos])
        flag("bounds", at + " closed while out of service", 1);
      if ((ekind[pos] == EdgeKind::InService || ekind[pos] == EdgeKind::Regulator) &&
          !plan.y[pos])
        flag("bounds", at + " open while fixed in service", 1);
      const double gate = plan.y[pos];
      in_box("bounds", at + " P", plan.P[pos], e.P_min, e.P_max, gate);
      in_box("bounds", at + " Q", plan.Q[pos], e.Q_min, e.Q_max, gate);
    }
  }

  void check_balance() {
    for (const Bus& b : f.buses) {
      double rp = plan.p[b.id], rq = plan.q[b.id];
      for (std::size_t pos = 0; pos < f.edges.size(); ++pos) {
        if (f.edges[pos].from == b.id) {
          rp -= plan.P[pos];
          rq -= plan.Q[pos];
        } else if (f.edges[pos].to == b.id) {
          rp += plan.P[pos];
          rq += plan.Q[pos];
        }
      }
      const std::string at = "bus " + b.name;
      if (std::abs(rp) > tol * std::max(1.0, std::abs(plan.p[b.id])))
        flag("balance", at + " active", std::abs(rp));
      if (std::abs(rq) > tol * std::max(1.0, std::abs(plan.q[b.id])))
        flag("balance", at + " reactive", std::abs(rq));
    }
  }

  void check_voltage_drop() {
    const double ps = 2.0 / f.base_kva;
    for (std::size_t pos = 0; pos < f.edges.size(); ++pos) {
      const Edge& e = f.edges[pos];
      if (ekind[pos] == EdgeKind::Regulator || !plan.y[pos]) continue;
      const double lhs = plan.v[e.from] - plan.v[e.to] -
                         ps * (e.r * plan.P[pos] + e.x * plan.Q[pos]);
      if (std::abs(lhs) > tol)
        flag("voltage_drop", "edge " + e.name, std::abs(lhs));
    }
  }

  void check_regulator() {
    const int center = (f.tap_count + 1) / 2;
    for (std::size_t pos = 0; pos < f.edges.size(); ++pos) {
      if (ekind[pos] != EdgeKind::Regulator) continue;
      const Edge& e = f.edges[pos];
      auto it = plan.taps.find(e.id);
      if (it == plan.taps.end()) {
        flag("regulator", "edge " + e.name + " has no tap", 1);
        continue;
      }
      const int k = it->second;
      if (k < 1 || k > f.tap_count) {
        flag("regulator", "edge " + e.name + " tap index", k);
        continue;
      }
      const double ratio = 1.0 + f.tap_step * (k - center);
      const double resid = plan.v[e.to] - ratio * ratio * plan.v[e.from];
      if (std::abs(resid) > tol)
        flag("regulator", "edge " + e.name, std::abs(resid));
    }
  }

  void check_radiality() {
    if (!is_forest(f, plan.y)) flag("radiality", "closed-edge subgraph", 1);
  }

  void check_status_propagation() {
    for (std::size_t pos = 0; pos < f.edges.size(); ++pos) {
      const Edge& e = f.edges[pos];
      if (plan.y[pos] && plan.x[e.from] != plan.x[e.to])
        flag("status_propagation", "edge " + e.name, 1);
    }
  }

  void check_nbs_reachability() {
    const auto adj = f.adjacency();
    for (int i : f.nbs_buses()) {
      if (!plan.x[i]) continue;
      // Graph search over closed edges, independent of the delta variables.
      std::vector<uint8_t> seen(f.buses.size(), 0);
      std::deque<int> queue{i};
      seen[i] = 1;
      bool ok = false;
      while (!queue.empty() && !ok) {
        const int u = queue.front();
        queue.pop_front();
        if (u == 0 ||
            (f.buses[u].kind == BusKind::GenBlackStart && plan.x[u])) {
          ok = true;
          break;
        }
        for (auto [pos, w] : adj[u])
          if (plan.y[pos] && !seen[w]) {
            seen[w] = 1;
            queue.push_back(w);
          }
      }
      if (!ok)
        flag("nbs_reachability", "bus " + f.buses[i].name, 1);
    }
  }

  void check_coordination() {
    for (const auto& island : energized_components(f, plan.x, plan.y)) {
      const bool has_root =
          std::find(island.begin(), island.end(), 0) != island.end();
      int reference = -1;  // highest-ranked energized BS gen
      for (int bus : island) {
        if (f.buses[bus].kind != BusKind::GenBlackStart) continue;
        if (reference < 0 || outranks(f.buses[bus], f.buses[reference]))
          reference = bus;
      }
      const std::string at = "island of bus " + f.buses[island.front()].name;
      for (int bus : island) {
        if (f.buses[bus].kind != BusKind::GenBlackStart) continue;
        auto it = plan.modes.find(bus);
        if (it == plan.modes.end()) {
          flag("coordination", at + ": no mode for bus " + f.buses[bus].name, 1);
          continue;
        }
        const bool should_be_pv = !has_root && bus == reference;
        if (should_be_pv) {
          if (it->second != GenMode::PV)
            flag("coordination", at + ": bus " + f.buses[bus].name +
                                     " must be the PV reference", 1);
          else if (std::abs(plan.v[bus] - f.v0) > tol)
            flag("coordination", at + ": PV bus " + f.buses[bus].name +
                                     " off the reference voltage",
                 std::abs(plan.v[bus] - f.v0));
        } else if (it->second != GenMode::PQ) {
          flag("coordination", at + ": bus " + f.buses[bus].name + " must be PQ", 1);
        }
      }
    }
  }

  void check_no_deenergization() {
    for (const Bus& b : f.buses)
      if (sc.x0[b.id] && !plan.x[b.id])
        flag("no_deenergization", "bus " + b.name, 1);
  }

  void check_objective_audit() {
    double served = 0;
    for (const Bus& b : f.buses)
      if (b.id != 0 && !b.is_gen()) served += plan.p[b.id];
    double switching = 0;
    for (std::size_t pos = 0; pos < f.edges.size(); ++pos)
      if (f.edges[pos].kind == EdgeKind::Switch)
        switching += std::abs(static_cast<double>(plan.y[pos]) - sc.y0[pos]);
    const double recomputed = served + f.lambda * switching;
    const double diff = std::abs(recomputed - plan.objective);
    if (diff > tol * std::max(1.0, std::abs(recomputed)))
      flag("objective_audit", "plan", diff);
  }
};

}  // namespace

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["pass"] = pass;
  doc["violations"] = nlohmann::ordered_json::array();
  for (const Violation& v : violations) {
    nlohmann::ordered_json jv;
    jv["check"] = v.check;
    jv["entity"] = v.entity;
    jv["magnitude"] = v.magnitude;
    doc["violations"].push_back(jv);
  }
  return doc.dump(2) + "\n";
}

ValidationReport validate(const Feeder& feeder, const OutageScenario& scenario,
                          const RestorationPlan& plan, double tol) {
  if (scenario.x0.size() != feeder.buses.size() ||
      scenario.y0.size() != feeder.edges.size())
    throw Error("validate: scenario shape does not match the feeder");
  Checker c(feeder, scenario, plan, tol);
  c.check_bounds();
  c.check_balance();
  c.check_voltage_drop();
  c.check_regulator();
  c.check_radiality();
  c.check_status_propagation();
  c.check_nbs_reachability();
  c.check_coordination();
  c.check_no_deenergization();
  c.check_objective_audit();
  return c.report;
}

}  // namespace dsr
