#include <cmath>
#include <map>
#include <string>

#include "dsr/feeder.hpp"

namespace dsr {

// Single-phase equivalent of the modified IEEE 37-bus feeder: spot loads
// summed per bus, two black-start diesel DGs (705, 710), three rooftop
// solar DGs (718, 730, 738) sized at half the local spot load, elastic
// loads on 701, 722, 737, the substation regulator on 799-701, three
// sectionalizing switches (702-703, 704-720, 734-737), and two normally
// open tie switches (742-722, 741-736). Exact switch and tie placement is
// an assumption of this data set; it is chosen so that the graph carries
// two simple cycles, 21 solar coordination paths, and 8 black-start
// coordination paths.
Feeder builtin_ieee37() {
  Feeder f;
  f.base_kva = 2500;
  f.base_kv = 4.8;
  f.v0 = 1.0;
  f.lambda = 1e-3;

  const double vlo = 0.97 * 0.97, vhi = 1.03 * 1.03;
  const double z_base = f.base_kv * f.base_kv * 1000.0 / f.base_kva;  // ohm

  struct Injection {
    BusKind kind;
    double p, q;  // nominal kW / kVAr (loads) or rating (generators)
  };
  // Spot loads of the 37-bus test feeder summed per bus. The co-located
  // loads at the solar buses 718, 730, 738 are replaced by the DG rating
  // (half the nominal load); those buses are excluded from the served-load
  // objective anyway.
  const std::map<std::string, Injection> inj = {
      {"701", {BusKind::LoadElastic, 630, 315}},
      {"712", {BusKind::LoadFixed, 85, 40}},
      {"713", {BusKind::LoadFixed, 85, 40}},
      {"714", {BusKind::LoadFixed, 38, 18}},
      {"718", {BusKind::GenNonBlackStart, 42.5, 0}},
      {"720", {BusKind::LoadFixed, 85, 40}},
      {"722", {BusKind::LoadElastic, 161, 80}},
      {"724", {BusKind::LoadFixed, 42, 21}},
      {"725", {BusKind::LoadFixed, 42, 21}},
      {"727", {BusKind::LoadFixed, 42, 21}},
      {"728", {BusKind::LoadFixed, 126, 63}},
      {"729", {BusKind::LoadFixed, 42, 21}},
      {"705", {BusKind::GenBlackStart, 459.3, 0}},
      {"710", {BusKind::GenBlackStart, 918.5, 0}},
      {"730", {BusKind::GenNonBlackStart, 42.5, 0}},
      {"731", {BusKind::LoadFixed, 85, 40}},
      {"732", {BusKind::LoadFixed, 42, 21}},
      {"733", {BusKind::LoadFixed, 85, 40}},
      {"734", {BusKind::LoadFixed, 42, 21}},
      {"735", {BusKind::LoadFixed, 85, 40}},
      {"736", {BusKind::LoadFixed, 42, 21}},
      {"737", {BusKind::LoadElastic, 140, 70}},
      {"738", {BusKind::GenNonBlackStart, 63, 0}},
      {"740", {BusKind::LoadFixed, 85, 40}},
      {"741", {BusKind::LoadFixed, 42, 21}},
      {"742", {BusKind::LoadFixed, 93, 44}},
      {"744", {BusKind::LoadFixed, 42, 21}},
  };

  const char* names[] = {"799", "701", "702", "703", "704", "705", "706",
                         "707", "708", "709", "710", "711", "712", "713",
                         "714", "718", "720", "722", "724", "725", "727",
                         "728", "729", "730", "731", "732", "733", "734",
                         "735", "736", "737", "738", "740", "741", "742",
                         "744", "775"};
  std::map<std::string, int> bus_id;
  int next_id = 0;
  for (const char* name : names) bus_id[name] = next_id++;

  for (const char* name : names) {
    Bus b;
    b.id = bus_id[name];
    b.name = name;
    b.v_min = vlo;
    b.v_max = vhi;
    if (b.id == 0) {
      b.kind = BusKind::Root;
      b.v_min = b.v_max = f.v0;
      b.p_min = -f.base_kva;
      b.p_max = f.base_kva;
      b.q_min = -f.base_kva;
      b.q_max = f.base_kva;
    } else if (auto it = inj.find(name); it != inj.end()) {
      const Injection& d = it->second;
      b.kind = d.kind;
      switch (d.kind) {
        case BusKind::LoadFixed:
          b.p_min = b.p_max = -d.p;
          b.q_min = b.q_max = -d.q;
          break;
        case BusKind::LoadElastic:
          b.p_min = -d.p;
          b.p_max = -d.p / 2;
          b.q_min = -d.q;
          b.q_max = -d.q / 2;
          break;
        case BusKind::GenBlackStart:
          b.p_min = 0;
          b.p_max = d.p;
          // 0.9 power-factor reactive envelope
          b.q_max = 0.484 * d.p;
          b.q_min = -b.q_max;
          b.rating = d.p;
          break;
        case BusKind::GenNonBlackStart:
          b.p_min = 0;
          b.p_max = d.p;
          b.q_min = b.q_max = 0;
          b.rating = d.p;
          break;
        default:
          break;
      }
    } else {
      b.kind = BusKind::Junction;
    }
    f.buses.push_back(b);
  }

  // Underground cable configurations, ohm per mile.
  const std::map<int, std::pair<double, double>> cfg = {
      {721, {0.2926, 0.1973}},
      {722, {0.4751, 0.2973}},
      {723, {1.2936, 0.6713}},
      {724, {2.0952, 0.7758}},
  };
  struct Line {
    const char *from, *to;
    double feet;
    int config;
    EdgeKind kind;
  };
  const Line lines[] = {
      {"701", "702", 960, 722, EdgeKind::InService},
      {"702", "705", 400, 724, EdgeKind::InService},
      {"702", "713", 360, 723, EdgeKind::InService},
      {"702", "703", 1320, 722, EdgeKind::Switch},
      {"703", "727", 240, 724, EdgeKind::InService},
      {"703", "730", 600, 723, EdgeKind::InService},
      {"704", "714", 80, 724, EdgeKind::InService},
      {"704", "720", 800, 723, EdgeKind::Switch},
      {"705", "742", 320, 724, EdgeKind::InService},
      {"705", "712", 240, 724, EdgeKind::InService},
      {"706", "725", 280, 724, EdgeKind::InService},
      {"707", "724", 760, 724, EdgeKind::InService},
      {"707", "722", 120, 724, EdgeKind::InService},
      {"708", "733", 320, 723, EdgeKind::InService},
      {"708", "732", 320, 724, EdgeKind::InService},
      {"709", "731", 600, 723, EdgeKind::InService},
      {"709", "708", 320, 723, EdgeKind::InService},
      {"710", "735", 200, 724, EdgeKind::InService},
      {"710", "736", 1280, 724, EdgeKind::InService},
      {"711", "741", 400, 723, EdgeKind::InService},
      {"711", "740", 200, 724, EdgeKind::InService},
      {"713", "704", 520, 723, EdgeKind::InService},
      {"714", "718", 520, 724, EdgeKind::InService},
      {"720", "707", 920, 724, EdgeKind::InService},
      {"720", "706", 600, 723, EdgeKind::InService},
      {"727", "744", 280, 723, EdgeKind::InService},
      {"730", "709", 200, 723, EdgeKind::InService},
      {"733", "734", 560, 723, EdgeKind::InService},
      {"734", "737", 640, 723, EdgeKind::Switch},
      {"734", "710", 520, 724, EdgeKind::InService},
      {"737", "738", 400, 723, EdgeKind::InService},
      {"738", "711", 400, 723, EdgeKind::InService},
      {"744", "728", 200, 724, EdgeKind::InService},
      {"744", "729", 280, 724, EdgeKind::InService},
  };

  const double flow_cap = f.base_kva;
  int edge_id = 0;
  auto add_edge = [&](const std::string& from, const std::string& to,
                      EdgeKind kind, double r, double x, double cap,
                      bool normally_closed, const std::string& prefix) {
    Edge e;
    e.id = edge_id++;
    e.name = prefix + from + "-" + to;
    e.from = bus_id.at(from);
    e.to = bus_id.at(to);
    e.kind = kind;
    e.r = r;
    e.x = x;
    e.P_max = cap;
    e.P_min = -cap;
    e.Q_max = cap;
    e.Q_min = -cap;
    e.normally_closed = normally_closed;
    f.edges.push_back(e);
  };

  // Substation regulator, ideal; the substation limit rides on its flow bounds.
  add_edge("799", "701", EdgeKind::Regulator, 0, 0, flow_cap, true, "reg-");
  for (const Line& l : lines) {
    auto [r_mi, x_mi] = cfg.at(l.config);
    add_edge(l.from, l.to, l.kind, r_mi * l.feet / 5280.0 / z_base,
             x_mi * l.feet / 5280.0 / z_base, flow_cap, true, "");
  }
  // 500 kVA transformer to the dead-end secondary bus 775.
  add_edge("709", "775", EdgeKind::InService, 0.0905, 0.2020, 500, true, "xfm-");
  // Normally open tie lines added by the modification.
  auto [r_mi, x_mi] = cfg.at(724);
  const double tie_r = r_mi * 500 / 5280.0 / z_base;
  const double tie_x = x_mi * 500 / 5280.0 / z_base;
  add_edge("742", "722", EdgeKind::Switch, tie_r, tie_x, flow_cap, false, "tie-");
  add_edge("741", "736", EdgeKind::Switch, tie_r, tie_x, flow_cap, false, "tie-");

  return f;
}

}  // namespace dsr
