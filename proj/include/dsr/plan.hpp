#ifndef DSR_PLAN_HPP
#define DSR_PLAN_HPP

#include <map>
#include <string>
#include <vector>

#include "dsr/model.hpp"
#include "dsr/solver.hpp"

namespace dsr {

enum class GenMode { PV, PQ };

/// Decision content of a solved restoration: statuses, switch states, taps,
/// dispatch, flows, and black-start operating modes.
struct RestorationPlan {
  std::vector<uint8_t> x;       // per bus id
  std::vector<uint8_t> y;       // per edge position
  std::map<int, int> taps;      // regulator edge id -> tap index 1..33
  std::vector<double> v, p, q;  // per bus id
  std::vector<double> P, Q;     // per edge position
  std::map<int, GenMode> modes;  // BS bus id -> mode (energized buses)
  double objective = 0;          // reported objective, for the audit
};

/// Rounds binaries (|value - round| <= 1e-6, else throws) and reads the tap
/// index of each active regulator from its unique t_{r,k} = 1.
RestorationPlan extract_plan(const Feeder& feeder, const MilpModel& model,
                             const SolveReport& report);

std::string plan_to_json(const Feeder& feeder, const RestorationPlan& plan);
RestorationPlan plan_from_json(const Feeder& feeder, const std::string& text);

}  // namespace dsr

#endif
