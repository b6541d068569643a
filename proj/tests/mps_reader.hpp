#ifndef DSR_TESTS_MPS_READER_HPP
#define DSR_TESTS_MPS_READER_HPP

// Minimal reference reader for free-format MPS, independent of the export
// path. Reconstructs the matrix for round-trip comparison.

#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace dsr_test {

struct MpsLp {
  std::map<std::string, char> row_sense;              // L/G/E
  std::map<std::string, std::map<std::string, double>> matrix;  // row -> col -> coef
  std::map<std::string, double> objective;            // col -> coef
  std::map<std::string, double> rhs;
  std::map<std::string, double> lower, upper;
  std::map<std::string, bool> integer;
  std::vector<std::string> row_order, col_order;
  std::string objective_row;
};

inline MpsLp read_mps(const std::string& text) {
  MpsLp lp;
  std::istringstream in(text);
  std::string line, section;
  auto tokens = [](const std::string& s) {
    std::istringstream ts(s);
    std::vector<std::string> out;
    std::string tok;
    while (ts >> tok) out.push_back(tok);
    return out;
  };
  const double inf = std::numeric_limits<double>::infinity();
  auto touch_col = [&](const std::string& col) {
    if (!lp.lower.count(col)) {
      lp.lower[col] = 0;
      lp.upper[col] = inf;
      lp.integer[col] = false;
      lp.col_order.push_back(col);
    }
  };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*') continue;
    const auto tk = tokens(line);
    if (tk.empty()) continue;
    if (line[0] != ' ' || tk[0] == "NAME" || tk[0] == "ROWS" ||
        tk[0] == "COLUMNS" || tk[0] == "RHS" || tk[0] == "RANGES" ||
        tk[0] == "BOUNDS" || tk[0] == "ENDATA") {
      section = tk[0];
      continue;
    }
    if (section == "ROWS") {
      if (tk[0] == "N") {
        lp.objective_row = tk[1];
      } else {
        lp.row_sense[tk[1]] = tk[0][0];
        lp.row_order.push_back(tk[1]);
      }
    } else if (section == "COLUMNS") {
      touch_col(tk[0]);
      for (std::size_t i = 1; i + 1 < tk.size(); i += 2) {
        const double coef = std::stod(tk[i + 1]);
        if (tk[i] == lp.objective_row)
          lp.objective[tk[0]] += coef;
        else
          lp.matrix[tk[i]][tk[0]] += coef;
      }
    } else if (section == "RHS") {
      for (std::size_t i = 1; i + 1 < tk.size(); i += 2)
        lp.rhs[tk[i]] = std::stod(tk[i + 1]);
    } else if (section == "BOUNDS") {
      const std::string& kind = tk[0];
      const std::string& col = tk[2];
      touch_col(col);
      if (kind == "BV") {
        lp.lower[col] = 0;
        lp.upper[col] = 1;
        lp.integer[col] = true;
      } else if (kind == "FX") {
        lp.lower[col] = lp.upper[col] = std::stod(tk[3]);
      } else if (kind == "LO") {
        lp.lower[col] = std::stod(tk[3]);
      } else if (kind == "UP") {
        lp.upper[col] = std::stod(tk[3]);
      } else if (kind == "MI") {
        lp.lower[col] = -inf;
      } else if (kind == "PL") {
        lp.upper[col] = inf;
      }
    }
  }
  return lp;
}

}  // namespace dsr_test

#endif
