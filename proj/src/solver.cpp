#include "dsr/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

namespace dsr {

namespace {

constexpr double kIntTol = 1e-6;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  double bound = -kInf;
  int depth = 0;
  long id = 0;
  std::vector<std::pair<int, uint8_t>> fixings;  // (var id, value)
};

struct NodeOrder {
  // Best bound first, then deeper, then lower id. priority_queue pops the
  // "largest", so the comparison is inverted.
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.id > b.id;
  }
};

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::string to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::Optimal: return "optimal";
    case MilpStatus::Infeasible: return "infeasible";
    case MilpStatus::GapLimit: return "gap_limit";
    case MilpStatus::NodeLimit: return "node_limit";
    case MilpStatus::TimeLimit: return "time_limit";
  }
  return "?";
}

SolveReport solve_milp(const MilpModel& model, const SolveOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.objective = std::numeric_limits<double>::quiet_NaN();

  std::vector<double> base_lo(model.vars.size()), base_hi(model.vars.size());
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    base_lo[j] = model.vars[j].lower;
    base_hi[j] = model.vars[j].upper;
  }
  std::vector<int> binaries;
  for (const Variable& v : model.vars)
    if (v.integrality == VarKind::Binary) binaries.push_back(v.id);

  // A node whose bound is within this margin of the incumbent cannot hold a
  // solution better than the requested gap.
  const auto prune_margin = [&](double inc) {
    return std::max(1e-9, options.gap_tol) * std::max(1.0, std::abs(inc));
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push(Node{});
  long next_id = 1;
  bool have_incumbent = false;
  double incumbent = kInf;
  double min_pruned = kInf;  // weakest bound discarded by the cutoff

  std::vector<double> lo(base_lo), hi(base_hi);
  MilpStatus status = MilpStatus::Infeasible;
  bool stopped = false;

  while (!open.empty()) {
    if (options.time_limit_s > 0 && elapsed_s(start) > options.time_limit_s) {
      status = MilpStatus::TimeLimit;
      stopped = true;
      break;
    }
    if (options.node_limit > 0 && report.nodes >= options.node_limit) {
      status = MilpStatus::NodeLimit;
      stopped = true;
      break;
    }
    const Node node = open.top();
    open.pop();
    if (have_incumbent && node.bound >= incumbent - prune_margin(incumbent)) {
      // Best-first: every remaining node is at least as bounded.
      min_pruned = std::min(min_pruned, node.bound);
      break;
    }

    lo = base_lo;
    hi = base_hi;
    for (auto [var, val] : node.fixings) lo[var] = hi[var] = val;

    if (options.bound_trace) options.bound_trace->push_back(node.bound);
    ++report.nodes;
    const LpSolution relax = solve_lp(model, lo, hi);
    if (relax.status == LpStatus::Infeasible) continue;
    if (relax.status == LpStatus::Unbounded)
      throw Error("solve_milp: unbounded relaxation; finite variable bounds "
                  "are required");
    if (have_incumbent &&
        relax.objective >= incumbent - prune_margin(incumbent)) {
      min_pruned = std::min(min_pruned, relax.objective);
      continue;
    }

    // Most fractional binary, ties to the lowest variable id.
    int branch_var = -1;
    double branch_val = 0, best_dist = kIntTol;
    for (int b : binaries) {
      if (lo[b] >= hi[b]) continue;
      const double val = relax.values[b];
      const double dist = std::abs(val - std::round(val));
      if (dist > best_dist + 1e-15) {
        best_dist = dist;
        branch_var = b;
        branch_val = val;
      }
    }

    if (branch_var < 0) {
      // Integral and strictly better than any previous incumbent.
      incumbent = relax.objective;
      have_incumbent = true;
      report.values = relax.values;
      report.objective = relax.objective;
      continue;
    }

    // The branch agreeing with the fractional value is explored first among
    // equal bounds (lower node id wins the tie).
    const uint8_t first = branch_val >= 0.5 ? 1 : 0;
    for (const uint8_t val : {first, static_cast<uint8_t>(1 - first)}) {
      Node child;
      child.bound = relax.objective;
      child.depth = node.depth + 1;
      child.id = next_id++;
      child.fixings = node.fixings;
      child.fixings.push_back({branch_var, val});
      open.push(std::move(child));
    }
  }

  if (!stopped) status = have_incumbent ? MilpStatus::Optimal : MilpStatus::Infeasible;

  double bound = std::min(min_pruned, incumbent);
  if (stopped || !have_incumbent) {
    if (!open.empty()) bound = std::min(bound, open.top().bound);
    if (!have_incumbent && open.empty() && min_pruned == kInf) bound = kInf;
  }
  report.bound = bound == kInf && !have_incumbent
                     ? std::numeric_limits<double>::quiet_NaN()
                     : bound;
  if (have_incumbent)
    report.gap = std::max(0.0, (incumbent - std::min(bound, incumbent)) /
                                   std::max(1.0, std::abs(incumbent)));
  else
    report.gap = kInf;
  report.status = status;
  report.wall_s = elapsed_s(start);
  return report;
}

}  // namespace dsr
