#ifndef DSR_BUILDER_HPP
#define DSR_BUILDER_HPP

#include <string>
#include <vector>

#include "dsr/graph.hpp"
#include "dsr/model.hpp"

namespace dsr {

struct BuildOptions {
  /// Reuse P_e, Q_e in the voltage-drop row of switch edges instead of the
  /// dedicated flow auxiliaries (fewer variables, same feasible set).
  bool tight_flows = false;
};

/// Squared tap ratios c_k = (1 + 0.00625 (k - 17))^2, k = 1..33.
std::vector<double> tap_ratio_table();

/// Envelope for z = b * y with b binary and y continuous with finite bounds.
/// Adds z with bounds [min(0, lo(y)), max(0, up(y))] and the four rows
///   b*lo <= z <= b*up,  y + (b-1)*up <= z <= y + (b-1)*lo.
/// Returns the id of z. Throws on unbounded y.
int add_mccormick(MilpModel& model, int binary_var, int cont_var,
                  const std::string& name, const std::string& tag);

/// Assembles the full restoration MILP from the feeder, the post-outage
/// scenario, and the enumerated cycles and coordination paths.
MilpModel build(const Feeder& feeder, const OutageScenario& scenario,
                const std::vector<EdgeIndicator>& cycles,
                const std::vector<EdgeIndicator>& nbs_paths,
                const std::vector<EdgeIndicator>& bs_paths,
                const BuildOptions& options = {});

}  // namespace dsr

#endif
