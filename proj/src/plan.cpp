#include "dsr/plan.hpp"

#include <cmath>

#include "json.hpp"

namespace dsr {

using ordered_json = nlohmann::ordered_json;
using nlohmann::json;

namespace {

uint8_t round_binary(double value, const std::string& name) {
  const double r = std::round(value);
  if (std::abs(value - r) > 1e-6 || (r != 0 && r != 1))
    throw Error("malformed plan: " + name + " = " + std::to_string(value) +
                " is not integral");
  return static_cast<uint8_t>(r);
}

}  // namespace

RestorationPlan extract_plan(const Feeder& feeder, const MilpModel& model,
                             const SolveReport& report) {
  if (report.values.size() != model.vars.size())
    throw Error("malformed plan: report does not carry a solution");
  const SymbolTable& sym = model.symbols;
  RestorationPlan plan;
  plan.objective = report.objective;

  const std::size_t nb = feeder.buses.size();
  const std::size_t ne = feeder.edges.size();
  plan.x.resize(nb);
  plan.v.resize(nb);
  plan.p.resize(nb);
  plan.q.resize(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    plan.x[i] = round_binary(report.values[sym.x[i]], model.vars[sym.x[i]].name);
    plan.v[i] = report.values[sym.v[i]];
    plan.p[i] = report.values[sym.p[i]];
    plan.q[i] = report.values[sym.q[i]];
  }
  plan.y.resize(ne);
  plan.P.resize(ne);
  plan.Q.resize(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    plan.y[e] = round_binary(report.values[sym.y[e]], model.vars[sym.y[e]].name);
    plan.P[e] = report.values[sym.P[e]];
    plan.Q[e] = report.values[sym.Q[e]];
  }
  for (const auto& [pos, tap_vars] : sym.taps) {
    int selected = -1;
    for (std::size_t k = 0; k < tap_vars.size(); ++k) {
      if (round_binary(report.values[tap_vars[k]],
                       model.vars[tap_vars[k]].name)) {
        if (selected >= 0)
          throw Error("malformed plan: regulator " + feeder.edges[pos].name +
                      " selects two taps");
        selected = static_cast<int>(k) + 1;
      }
    }
    if (selected < 0)
      throw Error("malformed plan: regulator " + feeder.edges[pos].name +
                  " selects no tap");
    plan.taps[feeder.edges[pos].id] = selected;
  }
  for (const auto& [bus, eps_var] : sym.eps_mode) {
    if (!plan.x[bus]) continue;  // mode is meaningful on energized buses only
    plan.modes[bus] = round_binary(report.values[eps_var],
                                   model.vars[eps_var].name)
                          ? GenMode::PQ
                          : GenMode::PV;
  }
  return plan;
}

std::string plan_to_json(const Feeder& feeder, const RestorationPlan& plan) {
  ordered_json doc;
  doc["objective"] = plan.objective;
  doc["x"] = plan.x;
  doc["v"] = plan.v;
  doc["p"] = plan.p;
  doc["q"] = plan.q;
  ordered_json y = ordered_json::object(), P = ordered_json::object(),
               Q = ordered_json::object();
  for (std::size_t pos = 0; pos < feeder.edges.size(); ++pos) {
    const std::string key = std::to_string(feeder.edges[pos].id);
    y[key] = static_cast<int>(plan.y[pos]);
    P[key] = plan.P[pos];
    Q[key] = plan.Q[pos];
  }
  doc["y"] = y;
  doc["P"] = P;
  doc["Q"] = Q;
  ordered_json taps = ordered_json::object();
  for (auto [edge_id, k] : plan.taps) taps[std::to_string(edge_id)] = k;
  doc["taps"] = taps;
  ordered_json modes = ordered_json::object();
  for (auto [bus, mode] : plan.modes)
    modes[std::to_string(bus)] = mode == GenMode::PV ? "PV" : "PQ";
  doc["modes"] = modes;
  return doc.dump(2) + "\n";
}

RestorationPlan plan_from_json(const Feeder& feeder, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("plan parse error: ") + e.what());
  }
  RestorationPlan plan;
  plan.objective = doc.value("objective", 0.0);
  const std::size_t nb = feeder.buses.size(), ne = feeder.edges.size();
  auto read_bus_array = [&](const char* key, auto& out) {
    if (!doc.contains(key) || doc[key].size() != nb)
      throw Error(std::string("plan: '") + key + "' must have one entry per bus");
    out.assign(doc[key].begin(), doc[key].end());
  };
  std::vector<double> xd;
  read_bus_array("x", xd);
  plan.x.resize(nb);
  for (std::size_t i = 0; i < nb; ++i)
    plan.x[i] = round_binary(xd[i], "x[" + feeder.buses[i].name + "]");
  read_bus_array("v", plan.v);
  read_bus_array("p", plan.p);
  read_bus_array("q", plan.q);
  plan.y.assign(ne, 0);
  plan.P.assign(ne, 0);
  plan.Q.assign(ne, 0);
  for (const char* key : {"y", "P", "Q"}) {
    if (!doc.contains(key)) throw Error(std::string("plan: missing '") + key + "'");
    for (auto& [id_str, val] : doc[key].items()) {
      const int pos = feeder.edge_index(std::stoi(id_str));
      if (pos < 0) throw Error("plan: unknown edge id " + id_str);
      if (key[0] == 'y')
        plan.y[pos] = round_binary(val.get<double>(), "y[" + id_str + "]");
      else if (key[0] == 'P')
        plan.P[pos] = val.get<double>();
      else
        plan.Q[pos] = val.get<double>();
    }
  }
  if (doc.contains("taps"))
    for (auto& [id_str, k] : doc["taps"].items())
      plan.taps[std::stoi(id_str)] = k.get<int>();
  if (doc.contains("modes"))
    for (auto& [bus_str, mode] : doc["modes"].items())
      plan.modes[std::stoi(bus_str)] =
          mode.get<std::string>() == "PV" ? GenMode::PV : GenMode::PQ;
  return plan;
}

}  // namespace dsr
