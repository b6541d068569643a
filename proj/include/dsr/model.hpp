#ifndef DSR_MODEL_HPP
#define DSR_MODEL_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dsr/feeder.hpp"

namespace dsr {

enum class VarKind { Continuous, Binary };
enum class Sense { LE, EQ, GE };

struct Variable {
  int id = -1;
  std::string name;
  double lower = 0, upper = 0;
  VarKind integrality = VarKind::Continuous;
};

struct LinearConstraint {
  std::vector<std::pair<int, double>> coeffs;  // (var id, coef), var ids unique
  Sense sense = Sense::LE;
  double rhs = 0;
  std::string tag;  // provenance: equation id + entity
};

/// Maps feeder entities to variable ids (-1 where a family does not apply).
struct SymbolTable {
  std::vector<int> x, v, p, q;             // per bus id
  std::vector<int> y, P, Q;                // per edge position
  std::vector<int> z_v_from, z_v_to;       // per edge position (switch edges)
  std::vector<int> z_P, z_Q;               // per edge position (switch edges)
  std::vector<int> s;                      // per edge position (switch edges)
  std::map<int, std::vector<int>> taps;    // edge position -> 33 tap binaries
  std::map<int, std::vector<int>> tap_z;   // edge position -> 33 McCormick aux
  std::vector<int> delta;                  // per NBS path index
  std::vector<int> eps_path;               // per BS path index
  std::map<int, int> eps_mode;             // BS bus id -> epsilon_i
};

struct MilpModel {
  std::vector<Variable> vars;
  std::vector<LinearConstraint> rows;
  std::vector<std::pair<int, double>> objective;  // minimization
  SymbolTable symbols;

  int add_var(const std::string& name, double lower, double upper,
              VarKind kind);
  void add_row(std::vector<std::pair<int, double>> coeffs, Sense sense,
               double rhs, std::string tag);

  std::size_t num_binary() const;
  /// Binaries whose bounds are not already fixed to a single value.
  std::vector<int> free_binaries() const;

  /// Human-readable constraint listing with tags (--dump-model).
  std::string dump() const;
};

}  // namespace dsr

#endif
