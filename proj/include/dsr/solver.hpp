#ifndef DSR_SOLVER_HPP
#define DSR_SOLVER_HPP

#include <string>
#include <vector>

#include "dsr/lp.hpp"
#include "dsr/model.hpp"

namespace dsr {

enum class MilpStatus { Optimal, Infeasible, GapLimit, NodeLimit, TimeLimit };

std::string to_string(MilpStatus s);

struct SolveOptions {
  double gap_tol = 1e-6;
  double time_limit_s = 300.0;
  long node_limit = 0;  // 0: unlimited
  std::vector<double>* bound_trace = nullptr;  // expanded-node bounds, in order
};

struct SolveReport {
  std::vector<double> values;  // incumbent, per model variable
  double objective = 0;        // incumbent objective (minimization)
  double bound = 0;            // proven lower bound
  double gap = 0;              // (objective - bound) / max(1, |objective|)
  long nodes = 0;
  double wall_s = 0;
  MilpStatus status = MilpStatus::Infeasible;
};

/// Best-first branch-and-bound over the LP relaxation. Branching variable:
/// most fractional binary, ties to the lowest variable id. Node selection:
/// best bound, ties to the deeper node, then lowest node id. Deterministic
/// for fixed inputs and options (except which limit fires first under a
/// wall-clock limit).
SolveReport solve_milp(const MilpModel& model, const SolveOptions& options = {});

}  // namespace dsr

#endif
