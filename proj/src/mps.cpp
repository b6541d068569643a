#include "dsr/mps.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_set>

namespace dsr {

namespace {

std::string mangle(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
        c == '-') {
      out.push_back(c);
    } else if (c == '[' || c == ',' || c == ':') {
      out.push_back('_');
    }  // ']' and other punctuation dropped
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])))
    out.insert(out.begin(), 'v');
  if (out.size() > 64) out.resize(64);
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string export_mps(const MilpModel& model, const std::string& name) {
  std::vector<std::string> col_names(model.vars.size());
  std::unordered_set<std::string> seen;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    col_names[j] = mangle(model.vars[j].name);
    if (!seen.insert(col_names[j]).second)
      throw Error("export_mps: name collision after truncation: " + col_names[j]);
  }

  std::ostringstream os;
  os << "NAME " << name << "\n";
  os << "ROWS\n";
  os << " N COST\n";
  std::vector<std::string> row_names(model.rows.size());
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    row_names[r] = "R" + std::to_string(r);
    const char sense = model.rows[r].sense == Sense::LE   ? 'L'
                       : model.rows[r].sense == Sense::GE ? 'G'
                                                          : 'E';
    os << " " << sense << " " << row_names[r] << "\n";
  }

  // Column-major coefficient lists.
  std::vector<std::vector<std::pair<int, double>>> by_col(model.vars.size());
  for (std::size_t r = 0; r < model.rows.size(); ++r)
    for (auto [id, coef] : model.rows[r].coeffs)
      by_col[id].push_back({static_cast<int>(r), coef});
  std::vector<double> obj(model.vars.size(), 0.0);
  for (auto [id, coef] : model.objective) obj[id] += coef;

  os << "COLUMNS\n";
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (obj[j] != 0) os << " " << col_names[j] << " COST " << num(obj[j]) << "\n";
    for (auto [r, coef] : by_col[j])
      os << " " << col_names[j] << " " << row_names[r] << " " << num(coef) << "\n";
  }

  os << "RHS\n";
  for (std::size_t r = 0; r < model.rows.size(); ++r)
    if (model.rows[r].rhs != 0)
      os << " RHS " << row_names[r] << " " << num(model.rows[r].rhs) << "\n";

  os << "RANGES\n";  // intentionally empty: every row carries a single sense

  os << "BOUNDS\n";
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    const Variable& v = model.vars[j];
    if (v.integrality == VarKind::Binary) {
      if (v.lower == v.upper)
        os << " FX BND " << col_names[j] << " " << num(v.lower) << "\n";
      else
        os << " BV BND " << col_names[j] << "\n";
      continue;
    }
    if (v.lower == v.upper) {
      os << " FX BND " << col_names[j] << " " << num(v.lower) << "\n";
      continue;
    }
    if (std::isfinite(v.lower))
      os << " LO BND " << col_names[j] << " " << num(v.lower) << "\n";
    else
      os << " MI BND " << col_names[j] << "\n";
    if (std::isfinite(v.upper))
      os << " UP BND " << col_names[j] << " " << num(v.upper) << "\n";
  }
  os << "ENDATA\n";
  return os.str();
}

}  // namespace dsr
