#ifndef DSR_MPS_HPP
#define DSR_MPS_HPP

#include <string>

#include "dsr/model.hpp"

namespace dsr {

/// Free-format MPS text: ROWS / COLUMNS / RHS / RANGES / BOUNDS, minimized
/// objective, binaries declared via BV bounds (FX when fixed by the
/// scenario). Names are symbol-table names reduced to MPS-safe tokens;
/// throws on a post-mangling collision. Deterministic ordering.
std::string export_mps(const MilpModel& model, const std::string& name = "DSR");

}  // namespace dsr

#endif
