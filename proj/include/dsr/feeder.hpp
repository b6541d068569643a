#ifndef DSR_FEEDER_HPP
#define DSR_FEEDER_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dsr {

/// Error type for all user-facing failures (parse errors, invariant
/// violations, budget overruns, solver breakdowns).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class BusKind {
  Root,
  LoadFixed,
  LoadElastic,
  GenBlackStart,
  GenNonBlackStart,
  Junction,
};

enum class EdgeKind {
  InService,
  OutOfService,
  Switch,
  Regulator,
};

std::string to_string(BusKind k);
std::string to_string(EdgeKind k);

struct Bus {
  int id = 0;
  std::string name;  // defaults to the decimal id
  BusKind kind = BusKind::Junction;
  double p_min = 0, p_max = 0;  // kW, signed injection bounds
  double q_min = 0, q_max = 0;  // kVAr
  double v_min = 1, v_max = 1;  // per-unit^2 squared-magnitude bounds
  double rating = 0;            // kW, generators (coordination ordering)

  bool is_load() const {
    return kind == BusKind::LoadFixed || kind == BusKind::LoadElastic;
  }
  bool is_gen() const {
    return kind == BusKind::GenBlackStart || kind == BusKind::GenNonBlackStart;
  }
};

struct Edge {
  int id = 0;
  std::string name;  // defaults to the decimal id
  int from = 0, to = 0;
  EdgeKind kind = EdgeKind::InService;
  double r = 0, x = 0;  // per-unit impedance on the feeder base
  double P_min = 0, P_max = 0;  // kW flow bounds
  double Q_min = 0, Q_max = 0;  // kVAr
  bool normally_closed = true;  // switches: pre-fault state
};

/// Static grid data. Immutable after construction; safe to share.
struct Feeder {
  double base_kva = 1000;
  double base_kv = 1;
  double v0 = 1.0;       // substation squared voltage, pu^2
  double lambda = 1e-3;  // switching penalty
  int tap_count = 33;
  double tap_step = 0.00625;
  std::vector<Bus> buses;   // sorted by id; ids contiguous from 0
  std::vector<Edge> edges;  // file order; ids unique

  int edge_index(int edge_id) const;  // -1 when absent
  const Edge& edge_by_id(int edge_id) const;
  int bus_index_by_name(const std::string& name) const;  // -1 when absent

  /// bus -> list of (edge position, neighbour bus id), sorted by edge id.
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;

  std::vector<int> switch_positions() const;
  std::vector<int> regulator_positions() const;
  std::vector<int> bs_buses() const;   // black-start bus ids, ascending
  std::vector<int> nbs_buses() const;  // non-black-start bus ids, ascending

  /// Total nominal load magnitude in kW (|p_min| over load buses).
  double total_nominal_load() const;
};

struct OutageScenario {
  std::set<int> failed_edges;          // edge ids
  std::vector<uint8_t> x0;             // per bus id
  std::vector<uint8_t> y0;             // per edge position
  std::map<int, double> solar_avail;   // NBS bus id -> available p_max, kW
};

Feeder load_feeder(const std::string& text);
std::string serialize(const Feeder& feeder);

/// The built-in single-phase modified IEEE 37-bus feeder.
Feeder builtin_ieee37();

/// Post-outage statuses: y0 from the failure set and switch states, x0 by
/// root connectivity over closed edges. switch_state maps edge id -> 0|1;
/// unspecified switches use their normally_closed flag.
OutageScenario derive_post_outage(const Feeder& feeder,
                                  const std::set<int>& failed,
                                  const std::map<int, int>& switch_state = {});

OutageScenario load_scenario(const Feeder& feeder, const std::string& text);
std::string serialize(const Feeder& feeder, const OutageScenario& scenario);

}  // namespace dsr

#endif
