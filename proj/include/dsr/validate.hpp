#ifndef DSR_VALIDATE_HPP
#define DSR_VALIDATE_HPP

#include <string>
#include <vector>

#include "dsr/plan.hpp"

namespace dsr {

struct Violation {
  std::string check;   // e.g. "bounds", "balance", "radiality"
  std::string entity;  // bus/edge/island description
  double magnitude = 0;
};

struct ValidationReport {
  bool pass = true;
  std::vector<Violation> violations;
  std::string to_json() const;
};

/// Checks a plan against the pre-linearization restoration semantics:
/// bounds and status gating, nodal balance, voltage drops, the regulator
/// law, radiality, status propagation, non-black-start reachability,
/// island PV/PQ coordination, x >= x0, and the objective audit. Shares no
/// constraint-emission code with the model builder.
ValidationReport validate(const Feeder& feeder, const OutageScenario& scenario,
                          const RestorationPlan& plan, double tol = 1e-6);

}  // namespace dsr

#endif
