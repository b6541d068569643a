#include "dsr/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dsr {

int MilpModel::add_var(const std::string& name, double lower, double upper,
                       VarKind kind) {
  if (!(lower <= upper))
    throw Error("variable " + name + ": lower > upper");
  if (kind == VarKind::Binary && (lower < 0 || upper > 1))
    throw Error("variable " + name + ": binary bounds outside [0,1]");
  Variable v;
  v.id = static_cast<int>(vars.size());
  v.name = name;
  v.lower = lower;
  v.upper = upper;
  v.integrality = kind;
  vars.push_back(std::move(v));
  return vars.back().id;
}

void MilpModel::add_row(std::vector<std::pair<int, double>> coeffs, Sense sense,
                        double rhs, std::string tag) {
  std::sort(coeffs.begin(), coeffs.end());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    auto [id, coef] = coeffs[i];
    if (id < 0 || id >= static_cast<int>(vars.size()))
      throw Error("row " + tag + ": unknown variable id");
    if (i > 0 && coeffs[i - 1].first == id)
      throw Error("row " + tag + ": duplicate variable id");
    if (!std::isfinite(coef)) throw Error("row " + tag + ": non-finite coefficient");
  }
  std::erase_if(coeffs, [](const auto& c) { return c.second == 0.0; });
  LinearConstraint c;
  c.coeffs = std::move(coeffs);
  c.sense = sense;
  c.rhs = rhs;
  c.tag = std::move(tag);
  rows.push_back(std::move(c));
}

std::size_t MilpModel::num_binary() const {
  std::size_t n = 0;
  for (const Variable& v : vars)
    if (v.integrality == VarKind::Binary) ++n;
  return n;
}

std::vector<int> MilpModel::free_binaries() const {
  std::vector<int> out;
  for (const Variable& v : vars)
    if (v.integrality == VarKind::Binary && v.lower != v.upper)
      out.push_back(v.id);
  return out;
}

std::string MilpModel::dump() const {
  std::ostringstream os;
  os.precision(12);
  os << "vars " << vars.size() << " rows " << rows.size() << "\n";
  for (const Variable& v : vars) {
    os << (v.integrality == VarKind::Binary ? "bin " : "con ") << v.name
       << " in [" << v.lower << ", " << v.upper << "]\n";
  }
  os << "min";
  for (auto [id, coef] : objective) os << " " << coef << "*" << vars[id].name;
  os << "\n";
  for (const LinearConstraint& row : rows) {
    os << row.tag << ":";
    for (auto [id, coef] : row.coeffs) {
      os << " " << (coef >= 0 ? "+" : "") << coef << "*" << vars[id].name;
    }
    os << (row.sense == Sense::LE ? " <= " : row.sense == Sense::GE ? " >= " : " == ")
       << row.rhs << "\n";
  }
  return os.str();
}

}  // namespace dsr
