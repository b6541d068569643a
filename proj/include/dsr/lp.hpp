#ifndef DSR_LP_HPP
#define DSR_LP_HPP

#include <limits>
#include <vector>

#include "dsr/model.hpp"

namespace dsr {

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus s);

struct LpSolution {
  std::vector<double> values;  // per model variable
  double objective = 0;
  LpStatus status = LpStatus::Optimal;
  long iterations = 0;
};

/// Bounded-variable primal simplex on the model with integrality relaxed to
/// the variable bounds. Deterministic: Dantzig pricing with lowest-index tie
/// breaks, Bland's rule after a pivot-count threshold. Throws Error("LP
/// numerical error ...") on numerical breakdown.
LpSolution solve_lp(const MilpModel& model);

/// Same, with per-variable bound overrides (branch-and-bound nodes).
LpSolution solve_lp(const MilpModel& model, const std::vector<double>& lower,
                    const std::vector<double>& upper);

}  // namespace dsr

#endif
