#include "dsr/feeder.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace dsr {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string to_string(BusKind k) {
  switch (k) {
    case BusKind::Root: return "root";
    case BusKind::LoadFixed: return "load_fixed";
    case BusKind::LoadElastic: return "load_elastic";
    case BusKind::GenBlackStart: return "gen_black_start";
    case BusKind::GenNonBlackStart: return "gen_non_black_start";
    case BusKind::Junction: return "junction";
  }
  return "?";
}

std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::InService: return "in_service";
    case EdgeKind::OutOfService: return "out_of_service";
    case EdgeKind::Switch: return "switch";
    case EdgeKind::Regulator: return "regulator";
  }
  return "?";
}

namespace {

BusKind bus_kind_from(const std::string& s, const std::string& where) {
  if (s == "root") return BusKind::Root;
  if (s == "load_fixed") return BusKind::LoadFixed;
  if (s == "load_elastic") return BusKind::LoadElastic;
  if (s == "gen_black_start") return BusKind::GenBlackStart;
  if (s == "gen_non_black_start") return BusKind::GenNonBlackStart;
  if (s == "junction") return BusKind::Junction;
  throw Error(where + ": unknown bus kind '" + s + "'");
}

EdgeKind edge_kind_from(const std::string& s, const std::string& where) {
  if (s == "in_service") return EdgeKind::InService;
  if (s == "out_of_service") return EdgeKind::OutOfService;
  if (s == "switch") return EdgeKind::Switch;
  if (s == "regulator") return EdgeKind::Regulator;
  throw Error(where + ": unknown edge kind '" + s + "'");
}

double require_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number())
    throw Error(where + ": missing or non-numeric field '" + key + "'");
  return obj[key].get<double>();
}

// Union-find over bus ids.
struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

void check_invariants(const Feeder& f) {
  const int n = static_cast<int>(f.buses.size());
  if (n == 0) throw Error("feeder: no buses");
  if (f.v0 <= 0) throw Error("feeder: v0 must be positive");
  if (f.lambda < 0) throw Error("feeder: lambda must be non-negative");
  if (f.tap_count < 1 || f.tap_count % 2 == 0)
    throw Error("feeder: tap_count must be a positive odd integer");

  int roots = 0;
  std::unordered_set<std::string> names;
  for (int i = 0; i < n; ++i) {
    const Bus& b = f.buses[i];
    const std::string where = "bus " + b.name;
    if (b.id != i) throw Error("feeder: bus ids must be contiguous from 0");
    if (!names.insert(b.name).second)
      throw Error(where + ": duplicate bus name");
    if (b.p_min > b.p_max) throw Error(where + ": p_min > p_max");
    if (b.q_min > b.q_max) throw Error(where + ": q_min > q_max");
    if (!(0 < b.v_min && b.v_min <= b.v_max))
      throw Error(where + ": requires 0 < v_min <= v_max");
    if (b.kind == BusKind::Root) {
      ++roots;
      if (b.id != 0) throw Error(where + ": root must have id 0");
      if (b.v_min != b.v_max)
        throw Error(where + ": root requires v_min == v_max == v0");
    }
    if (b.is_load() && b.p_max > 0)
      throw Error(where + ": load bus requires p_max <= 0");
    if (b.is_gen() && b.p_min < 0)
      throw Error(where + ": generator bus requires p_min >= 0");
    if (b.kind == BusKind::Junction &&
        (b.p_min != 0 || b.p_max != 0 || b.q_min != 0 || b.q_max != 0))
      throw Error(where + ": junction requires zero injection bounds");
    if (b.is_gen() && b.rating < 0)
      throw Error(where + ": negative rating");
  }
  if (roots != 1) throw Error("feeder: exactly one root bus required");
  if (f.buses[0].kind != BusKind::Root) throw Error("feeder: bus 0 must be the root");
  if (f.buses[0].v_min != f.v0)
    throw Error("feeder: root voltage bounds must equal v0");

  std::unordered_set<int> edge_ids;
  Dsu all(n), closed(n);
  for (const Edge& e : f.edges) {
    const std::string where = "edge " + e.name;
    if (!edge_ids.insert(e.id).second) throw Error(where + ": duplicate edge id");
    if (e.from == e.to) throw Error(where + ": from == to");
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw Error(where + ": endpoint bus does not exist");
    if (e.P_min > e.P_max) throw Error(where + ": P_min > P_max");
    if (e.Q_min > e.Q_max) throw Error(where + ": Q_min > Q_max");
    if (e.kind == EdgeKind::Regulator && (e.r != 0 || e.x != 0))
      throw Error(where + ": regulator must be ideal (r = x = 0)");
    all.join(e.from, e.to);
    if (e.kind == EdgeKind::InService || e.kind == EdgeKind::Regulator) {
      if (!closed.join(e.from, e.to))
        throw Error(where + ": structural cycle of non-switchable closed edges");
    }
  }
  for (int i = 1; i < n; ++i)
    if (all.find(i) != all.find(0))
      throw Error("feeder: bus " + f.buses[i].name + " is disconnected");
}

}  // namespace

int Feeder::edge_index(int edge_id) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].id == edge_id) return static_cast<int>(i);
  return -1;
}

const Edge& Feeder::edge_by_id(int edge_id) const {
  int pos = edge_index(edge_id);
  if (pos < 0) throw Error("edge id " + std::to_string(edge_id) + " does not exist");
  return edges[pos];
}

int Feeder::bus_index_by_name(const std::string& name) const {
  for (const Bus& b : buses)
    if (b.name == name) return b.id;
  return -1;
}

std::vector<std::vector<std::pair<int, int>>> Feeder::adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(buses.size());
  for (std::size_t pos = 0; pos < edges.size(); ++pos) {
    const Edge& e = edges[pos];
    adj[e.from].push_back({static_cast<int>(pos), e.to});
    adj[e.to].push_back({static_cast<int>(pos), e.from});
  }
  for (auto& lst : adj)
    std::sort(lst.begin(), lst.end(), [this](auto a, auto b) {
      return edges[a.first].id < edges[b.first].id;
    });
  return adj;
}

std::vector<int> Feeder::switch_positions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].kind == EdgeKind::Switch) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> Feeder::regulator_positions() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].kind == EdgeKind::Regulator) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> Feeder::bs_buses() const {
  std::vector<int> out;
  for (const Bus& b : buses)
    if (b.kind == BusKind::GenBlackStart) out.push_back(b.id);
  return out;
}

std::vector<int> Feeder::nbs_buses() const {
  std::vector<int> out;
  for (const Bus& b : buses)
    if (b.kind == BusKind::GenNonBlackStart) out.push_back(b.id);
  return out;
}

double Feeder::total_nominal_load() const {
  double total = 0;
  for (const Bus& b : buses)
    if (b.is_load()) total += std::abs(b.p_min);
  return total;
}

Feeder load_feeder(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("feeder parse error: ") + e.what());
  }
  if (!doc.is_object()) throw Error("feeder parse error: top level must be an object");

  Feeder f;
  f.base_kva = require_number(doc, "base_kva", "header");
  f.base_kv = require_number(doc, "base_kv", "header");
  f.v0 = require_number(doc, "v0", "header");
  f.lambda = require_number(doc, "lambda", "header");
  f.tap_count = doc.value("tap_count", 33);
  f.tap_step = doc.value("tap_step", 0.00625);

  if (!doc.contains("buses") || !doc["buses"].is_array())
    throw Error("feeder parse error: missing 'buses' array");
  if (!doc.contains("edges") || !doc["edges"].is_array())
    throw Error("feeder parse error: missing 'edges' array");

  for (const json& jb : doc["buses"]) {
    Bus b;
    if (!jb.contains("id") || !jb["id"].is_number_integer())
      throw Error("bus entry: missing integer 'id'");
    b.id = jb["id"].get<int>();
    const std::string where = "bus " + std::to_string(b.id);
    b.name = jb.value("name", std::to_string(b.id));
    b.kind = bus_kind_from(jb.value("kind", std::string("junction")), where);
    b.p_min = jb.value("p_min", 0.0);
    b.p_max = jb.value("p_max", 0.0);
    b.q_min = jb.value("q_min", 0.0);
    b.q_max = jb.value("q_max", 0.0);
    b.v_min = require_number(jb, "v_min", where);
    b.v_max = require_number(jb, "v_max", where);
    b.rating = jb.value("rating", b.is_gen() ? b.p_max : 0.0);
    f.buses.push_back(b);
  }
  std::sort(f.buses.begin(), f.buses.end(),
            [](const Bus& a, const Bus& b) { return a.id < b.id; });

  for (const json& je : doc["edges"]) {
    Edge e;
    if (!je.contains("id") || !je["id"].is_number_integer())
      throw Error("edge entry: missing integer 'id'");
    e.id = je["id"].get<int>();
    const std::string where = "edge " + std::to_string(e.id);
    e.name = je.value("name", std::to_string(e.id));
    if (!je.contains("from") || !je.contains("to"))
      throw Error(where + ": missing 'from'/'to'");
    e.from = je["from"].get<int>();
    e.to = je["to"].get<int>();
    e.kind = edge_kind_from(je.value("kind", std::string("in_service")), where);
    e.r = je.value("r", 0.0);
    e.x = je.value("x", 0.0);
    e.P_max = require_number(je, "P_max", where);
    e.P_min = je.value("P_min", -e.P_max);
    e.Q_max = require_number(je, "Q_max", where);
    e.Q_min = je.value("Q_min", -e.Q_max);
    e.normally_closed = je.value("normally_closed", e.kind != EdgeKind::OutOfService);
    f.edges.push_back(e);
  }

  check_invariants(f);
  return f;
}

std::string serialize(const Feeder& f) {
  ordered_json doc;
  doc["base_kva"] = f.base_kva;
  doc["base_kv"] = f.base_kv;
  doc["v0"] = f.v0;
  doc["lambda"] = f.lambda;
  doc["tap_count"] = f.tap_count;
  doc["tap_step"] = f.tap_step;
  doc["buses"] = ordered_json::array();
  for (const Bus& b : f.buses) {
    ordered_json jb;
    jb["id"] = b.id;
    jb["name"] = b.name;
    jb["kind"] = to_string(b.kind);
    jb["p_min"] = b.p_min;
    jb["p_max"] = b.p_max;
    jb["q_min"] = b.q_min;
    jb["q_max"] = b.q_max;
    jb["v_min"] = b.v_min;
    jb["v_max"] = b.v_max;
    jb["rating"] = b.rating;
    doc["buses"].push_back(jb);
  }
  doc["edges"] = ordered_json::array();
  for (const Edge& e : f.edges) {
    ordered_json je;
    je["id"] = e.id;
    je["name"] = e.name;
    je["from"] = e.from;
    je["to"] = e.to;
    je["kind"] = to_string(e.kind);
    je["r"] = e.r;
    je["x"] = e.x;
    je["P_min"] = e.P_min;
    je["P_max"] = e.P_max;
    je["Q_min"] = e.Q_min;
    je["Q_max"] = e.Q_max;
    je["normally_closed"] = e.normally_closed;
    doc["edges"].push_back(je);
  }
  return doc.dump(2) + "\n";
}

OutageScenario derive_post_outage(const Feeder& feeder,
                                  const std::set<int>& failed,
                                  const std::map<int, int>& switch_state) {
  OutageScenario sc;
  sc.failed_edges = failed;
  for (int id : failed) {
    int pos = feeder.edge_index(id);
    if (pos < 0) throw Error("failed edge id " + std::to_string(id) + " does not exist");
    if (feeder.edges[pos].kind == EdgeKind::OutOfService)
      throw Error("edge " + feeder.edges[pos].name + " is already out of service");
  }
  for (const auto& [id, state] : switch_state) {
    int pos = feeder.edge_index(id);
    if (pos < 0 || feeder.edges[pos].kind != EdgeKind::Switch)
      throw Error("switch_state refers to non-switch edge id " + std::to_string(id));
    if (state != 0 && state != 1)
      throw Error("switch_state for edge id " + std::to_string(id) + " must be 0 or 1");
  }

  sc.y0.assign(feeder.edges.size(), 0);
  for (std::size_t pos = 0; pos < feeder.edges.size(); ++pos) {
    const Edge& e = feeder.edges[pos];
    if (failed.count(e.id)) continue;
    switch (e.kind) {
      case EdgeKind::InService:
      case EdgeKind::Regulator:
        sc.y0[pos] = 1;
        break;
      case EdgeKind::Switch: {
        auto it = switch_state.find(e.id);
        sc.y0[pos] = it != switch_state.end() ? static_cast<uint8_t>(it->second)
                                              : static_cast<uint8_t>(e.normally_closed);
        break;
      }
      case EdgeKind::OutOfService:
        break;
    }
  }

  // Energized = connected to the root through closed edges.
  sc.x0.assign(feeder.buses.size(), 0);
  sc.x0[0] = 1;
  std::deque<int> queue{0};
  auto adj = feeder.adjacency();
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (auto [pos, w] : adj[u]) {
      if (sc.y0[pos] && !sc.x0[w]) {
        sc.x0[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return sc;
}

OutageScenario load_scenario(const Feeder& feeder, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("scenario parse error: ") + e.what());
  }
  std::set<int> failed;
  for (const json& j : doc.value("failed_edges", json::array()))
    failed.insert(j.get<int>());
  std::map<int, int> sw;
  if (doc.contains("switch_state"))
    for (auto& [key, val] : doc["switch_state"].items())
      sw[std::stoi(key)] = val.get<int>();
  OutageScenario sc = derive_post_outage(feeder, failed, sw);
  if (doc.contains("solar_avail")) {
    for (auto& [key, val] : doc["solar_avail"].items()) {
      int bus = std::stoi(key);
      if (bus < 0 || bus >= static_cast<int>(feeder.buses.size()) ||
          feeder.buses[bus].kind != BusKind::GenNonBlackStart)
        throw Error("solar_avail refers to non-NBS bus id " + key);
      double avail = val.get<double>();
      if (avail < 0 || avail > feeder.buses[bus].p_max + 1e-9)
        throw Error("solar_avail for bus " + feeder.buses[bus].name +
                    " outside [0, rated]");
      sc.solar_avail[bus] = avail;
    }
  }
  return sc;
}

std::string serialize(const Feeder& feeder, const OutageScenario& sc) {
  ordered_json doc;
  doc["failed_edges"] = sc.failed_edges;
  ordered_json sw = ordered_json::object();
  for (int pos : feeder.switch_positions()) {
    const Edge& e = feeder.edges[pos];
    if (!sc.failed_edges.count(e.id))
      sw[std::to_string(e.id)] = static_cast<int>(sc.y0[pos]);
  }
  doc["switch_state"] = sw;
  ordered_json solar = ordered_json::object();
  for (const auto& [bus, kw] : sc.solar_avail) solar[std::to_string(bus)] = kw;
  doc["solar_avail"] = solar;
  return doc.dump(2) + "\n";
}

}  // namespace dsr
