#include "dsr/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace dsr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;    // working feasibility tolerance
constexpr double kDualTol = 1e-9;    // reduced-cost tolerance
constexpr double kZeroTol = 1e-11;   // pivot-column zero threshold
constexpr double kCheckTol = 1e-7;   // final feasibility guarantee

enum ColStatus : int8_t { kAtLower, kAtUpper, kBasic };

// Reduced LP produced by substituting fixed variables and folding
// singleton rows into bounds.
struct Reduced {
  bool infeasible = false;
  std::vector<int> cols;                // reduced col -> model var id
  std::vector<int> model_to_col;        // model var id -> reduced col or -1
  std::vector<double> lo, up, obj;
  std::vector<std::vector<std::pair<int, double>>> row_coeffs;  // reduced ids
  std::vector<Sense> sense;
  std::vector<double> rhs;
  std::vector<double> fixed_value;      // per model var; meaningful when fixed
  std::vector<uint8_t> is_fixed;        // per model var
  std::vector<double> folded_lo, folded_up;  // bounds after singleton folding
};

Reduced fold(const MilpModel& model, const std::vector<double>& lower,
             const std::vector<double>& upper) {
  const std::size_t nvar = model.vars.size();
  Reduced red;
  std::vector<double> lo(lower), up(upper);
  red.fixed_value.assign(nvar, 0.0);
  red.is_fixed.assign(nvar, 0);

  auto fixed = [&](std::size_t j) { return up[j] - lo[j] <= 0; };
  for (std::size_t j = 0; j < nvar; ++j)
    if (lo[j] > up[j] + kFeasTol) {
      red.infeasible = true;
      return red;
    }

  std::vector<uint8_t> row_done(model.rows.size(), 0);
  bool changed = true;
  int passes = 0;
  while (changed && ++passes < 100) {
    changed = false;
    for (std::size_t r = 0; r < model.rows.size(); ++r) {
      if (row_done[r]) continue;
      const LinearConstraint& row = model.rows[r];
      double constant = 0;
      int active = -1;
      int nactive = 0;
      for (auto [id, coef] : row.coeffs) {
        if (coef == 0) continue;
        if (fixed(id)) {
          constant += coef * lo[id];
        } else {
          ++nactive;
          active = id;
        }
      }
      if (nactive >= 2) continue;
      row_done[r] = 1;
      changed = true;
      const double rest = row.rhs - constant;
      if (nactive == 0) {
        const double slack_tol = kFeasTol * std::max(1.0, std::abs(row.rhs));
        const bool ok = row.sense == Sense::LE   ? 0 <= rest + slack_tol
                        : row.sense == Sense::GE ? 0 >= rest - slack_tol
                                                 : std::abs(rest) <= slack_tol;
        if (!ok) {
          red.infeasible = true;
          return red;
        }
        continue;
      }
      // Single active variable: fold the row into its bounds.
      double coef = 0;
      for (auto [id, c] : row.coeffs)
        if (id == active) coef = c;
      const double bound = rest / coef;
      Sense s = row.sense;
      if (coef < 0 && s != Sense::EQ) s = (s == Sense::LE) ? Sense::GE : Sense::LE;
      if (s != Sense::GE) up[active] = std::min(up[active], bound);
      if (s != Sense::LE) lo[active] = std::max(lo[active], bound);
      if (lo[active] > up[active] + kFeasTol) {
        red.infeasible = true;
        return red;
      }
      if (lo[active] > up[active]) lo[active] = up[active];  // squeeze roundoff
    }
  }

  red.model_to_col.assign(nvar, -1);
  for (std::size_t j = 0; j < nvar; ++j) {
    if (fixed(j)) {
      red.is_fixed[j] = 1;
      red.fixed_value[j] = lo[j];
    }
  }
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    if (row_done[r]) continue;
    const LinearConstraint& row = model.rows[r];
    double constant = 0;
    std::vector<std::pair<int, double>> coeffs;
    for (auto [id, coef] : row.coeffs) {
      if (coef == 0) continue;
      if (red.is_fixed[id]) {
        constant += coef * red.fixed_value[id];
        continue;
      }
      if (red.model_to_col[id] < 0) {
        red.model_to_col[id] = static_cast<int>(red.cols.size());
        red.cols.push_back(id);
        red.lo.push_back(lo[id]);
        red.up.push_back(up[id]);
        red.obj.push_back(0);
      }
      coeffs.push_back({red.model_to_col[id], coef});
    }
    red.row_coeffs.push_back(std::move(coeffs));
    red.sense.push_back(row.sense);
    red.rhs.push_back(row.rhs - constant);
  }
  for (auto [id, coef] : model.objective)
    if (!red.is_fixed[id] && red.model_to_col[id] >= 0)
      red.obj[red.model_to_col[id]] += coef;
  // Variables outside every remaining row keep their bounds; they are
  // resolved directly by objective sign when expanding the solution.
  for (std::size_t j = 0; j < nvar; ++j)
    if (!red.is_fixed[j] && red.model_to_col[j] < 0) red.fixed_value[j] = lo[j];
  red.folded_lo = std::move(lo);
  red.folded_up = std::move(up);
  return red;
}

// Bounded-variable primal simplex with a composite phase 1, dense basis
// inverse with product-form updates, Dantzig pricing and a Bland fallback.
class Simplex {
 public:
  Simplex(const Reduced& red)
      : m_(static_cast<int>(red.row_coeffs.size())),
        n_(static_cast<int>(red.cols.size())) {
    ncols_ = n_ + m_;
    lo_.assign(ncols_, 0);
    up_.assign(ncols_, 0);
    cost_.assign(ncols_, 0);
    cols_.resize(ncols_);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = red.lo[j];
      up_[j] = red.up[j];
      cost_[j] = red.obj[j];
    }
    for (int r = 0; r < m_; ++r)
      for (auto [j, coef] : red.row_coeffs[r]) cols_[j].push_back({r, coef});
    rhs_.assign(red.rhs.begin(), red.rhs.end());
    for (int r = 0; r < m_; ++r) {
      const int s = n_ + r;
      cols_[s] = {{r, 1.0}};
      switch (red.sense[r]) {
        case Sense::LE: lo_[s] = 0, up_[s] = kInf; break;
        case Sense::GE: lo_[s] = -kInf, up_[s] = 0; break;
        case Sense::EQ: lo_[s] = 0, up_[s] = 0; break;
      }
    }
  }

  LpStatus run(long& iterations) {
    init_basis();
    const long bland_after = 4000 + 20L * (m_ + n_);
    const long iter_cap = 200000 + 200L * (m_ + n_);
    for (int attempt = 0; attempt < 5; ++attempt) {
      LpStatus claim;
      while (true) {
        if (iterations > iter_cap)
          throw Error("LP numerical error: iteration limit exceeded (m=" +
                      std::to_string(m_) + ", n=" + std::to_string(n_) + ")");
        const bool bland = iterations > bland_after;
        const bool feasible = infeasibility() <= kFeasTol;
        int entering, direction;
        if (!price(feasible, bland, entering, direction)) {
          claim = feasible ? LpStatus::Optimal : LpStatus::Infeasible;
          break;
        }
        ++iterations;
        if (!step(feasible, bland, entering, direction)) {
          claim = LpStatus::Unbounded;
          break;
        }
        if (iterations % 64 == 0) {
          refactor();
          recompute_basics();
        }
      }
      if (claim == LpStatus::Unbounded) return claim;
      // Confirm the terminal state against a freshly factorized basis.
      refactor();
      recompute_basics();
      const bool feasible = infeasibility() <= (claim == LpStatus::Optimal
                                                    ? kCheckTol
                                                    : kFeasTol);
      int entering, direction;
      const bool improvable = price(feasible, false, entering, direction);
      if (claim == LpStatus::Optimal && feasible && !improvable)
        return LpStatus::Optimal;
      if (claim == LpStatus::Infeasible && !feasible && !improvable)
        return LpStatus::Infeasible;
    }
    throw Error("LP numerical error: unstable terminal state (residual " +
                std::to_string(infeasibility()) + ")");
  }

  double value(int col) const { return x_[col]; }

 private:
  void init_basis() {
    x_.assign(ncols_, 0.0);
    status_.assign(ncols_, kAtLower);
    basic_.resize(m_);
    pos_in_basis_.assign(ncols_, -1);
    for (int j = 0; j < ncols_; ++j) {
      if (std::isfinite(lo_[j]))
        x_[j] = lo_[j], status_[j] = kAtLower;
      else if (std::isfinite(up_[j]))
        x_[j] = up_[j], status_[j] = kAtUpper;
      else
        x_[j] = 0, status_[j] = kAtLower;
    }
    for (int r = 0; r < m_; ++r) {
      basic_[r] = n_ + r;
      status_[n_ + r] = kBasic;
      pos_in_basis_[n_ + r] = r;
    }
    binv_.assign(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) binv_[static_cast<std::size_t>(r) * m_ + r] = 1.0;
    recompute_basics();
  }

  double infeasibility() const {
    double total = 0;
    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      if (x_[j] < lo_[j]) total += lo_[j] - x_[j];
      if (x_[j] > up_[j]) total += x_[j] - up_[j];
    }
    return total;
  }

  // w = Binv * a_j
  void ftran(int j, std::vector<double>& w) const {
    w.assign(m_, 0.0);
    for (auto [r, coef] : cols_[j]) {
      const double* col = binv_.data() + r;
      for (int i = 0; i < m_; ++i) w[i] += col[static_cast<std::size_t>(i) * m_] * coef;
    }
  }

  // pi = d^T Binv for a dense d over basis positions
  void btran(const std::vector<double>& d, std::vector<double>& pi) const {
    pi.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const double di = d[i];
      if (di == 0) continue;
      const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
      for (int k = 0; k < m_; ++k) pi[k] += di * row[k];
    }
  }

  // Chooses the entering column. Phase is selected by `feasible`.
  bool price(bool feasible, bool bland, int& entering, int& direction) {
    std::vector<double> d(m_, 0.0);
    if (feasible) {
      for (int i = 0; i < m_; ++i) d[i] = cost_[basic_[i]];
    } else {
      for (int i = 0; i < m_; ++i) {
        const int j = basic_[i];
        if (x_[j] < lo_[j] - kFeasTol) d[i] = -1;
        else if (x_[j] > up_[j] + kFeasTol) d[i] = 1;
      }
    }
    std::vector<double> pi;
    btran(d, pi);
    entering = -1;
    direction = 0;
    double best = 0;
    for (int j = 0; j < ncols_; ++j) {
      if (status_[j] == kBasic || lo_[j] == up_[j]) continue;
      double zeta = 0;
      for (auto [r, coef] : cols_[j]) zeta += pi[r] * coef;
      // Phase 2 reduced cost is c_j - zeta; phase 1 works on -zeta alone.
      double score = 0;
      int dir = 0;
      if (status_[j] == kAtLower) {
        const double red = feasible ? cost_[j] - zeta : -zeta;
        if (red < -kDualTol) score = -red, dir = +1;
      } else {
        const double red = feasible ? cost_[j] - zeta : -zeta;
        if (red > kDualTol) score = red, dir = -1;
      }
      if (dir == 0) continue;
      if (bland) {
        entering = j;
        direction = dir;
        return true;
      }
      if (score > best + 1e-15) {
        best = score;
        entering = j;
        direction = dir;
      }
    }
    return entering >= 0;
  }

  // One ratio-test step. Returns false on an unbounded direction.
  bool step(bool feasible, bool bland, int entering, int direction) {
    std::vector<double> w;
    ftran(entering, w);
    const double sigma = direction;  // +1 entering rises, -1 it falls

    // Events: basic variables hitting the bound that blocks (or, in phase 1,
    // the kink where an infeasible basic becomes feasible), plus the
    // entering variable reaching its opposite bound.
    double t_best = kInf;
    if (std::isfinite(up_[entering] - lo_[entering]))
      t_best = up_[entering] - lo_[entering];
    int leave = -1;          // basis position; -1 means bound flip
    double leave_at = 0;     // bound the leaving variable lands on
    double best_pivot = 0;
    // two passes: find min ratio, then the largest pivot among near-ties
    for (int pass = 0; pass < 2; ++pass) {
      const double t_cut = t_best + 1e-9;
      for (int i = 0; i < m_; ++i) {
        if (std::abs(w[i]) <= kZeroTol) continue;
        const int j = basic_[i];
        const double rate = -sigma * w[i];  // d x_B[i] / dt
        double target;
        if (!feasible && x_[j] < lo_[j] - kFeasTol) {
          if (rate <= 0) continue;
          target = lo_[j];
        } else if (!feasible && x_[j] > up_[j] + kFeasTol) {
          if (rate >= 0) continue;
          target = up_[j];
        } else {
          target = rate > 0 ? up_[j] : lo_[j];
          if (!std::isfinite(target)) continue;
        }
        const double t = (target - x_[j]) / rate;
        if (t < -kFeasTol) continue;
        const double tc = std::max(t, 0.0);
        if (pass == 0) {
          t_best = std::min(t_best, tc);
        } else if (tc <= t_cut) {
          const bool better =
              bland ? (leave < 0 || basic_[i] < basic_[leave])
                    : (std::abs(w[i]) > best_pivot + 1e-15);
          if (better) {
            best_pivot = std::abs(w[i]);
            leave = i;
            leave_at = target;
          }
        }
      }
      if (pass == 0 && !std::isfinite(t_best)) return false;  // unbounded
    }
    const double t = std::max(t_best, 0.0);

    // Move the solution.
    x_[entering] += sigma * t;
    for (int i = 0; i < m_; ++i) x_[basic_[i]] -= sigma * t * w[i];

    if (leave < 0) {
      // Bound flip only.
      status_[entering] = status_[entering] == kAtLower ? kAtUpper : kAtLower;
      x_[entering] = status_[entering] == kAtLower ? lo_[entering] : up_[entering];
      return true;
    }

    const int leaving = basic_[leave];
    x_[leaving] = leave_at;
    status_[leaving] = (leave_at == lo_[leaving]) ? kAtLower : kAtUpper;
    pos_in_basis_[leaving] = -1;
    basic_[leave] = entering;
    status_[entering] = kBasic;
    pos_in_basis_[entering] = leave;

    // Product-form update of Binv.
    const double pivot = w[leave];
    if (std::abs(pivot) < kZeroTol)
      throw Error("LP numerical error: vanishing pivot element");
    double* prow = binv_.data() + static_cast<std::size_t>(leave) * m_;
    for (int k = 0; k < m_; ++k) prow[k] /= pivot;
    for (int i = 0; i < m_; ++i) {
      if (i == leave || std::abs(w[i]) <= kZeroTol) continue;
      double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
      const double f = w[i];
      for (int k = 0; k < m_; ++k) row[k] -= f * prow[k];
    }
    return true;
  }

  // Rebuild Binv from scratch (Gauss-Jordan with partial pivoting).
  void refactor() {
    std::vector<double> a(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i)
      for (auto [r, coef] : cols_[basic_[i]]) a[static_cast<std::size_t>(r) * m_ + i] = coef;
    std::vector<double> inv(static_cast<std::size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<std::size_t>(i) * m_ + i] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = col;
      double best = std::abs(a[static_cast<std::size_t>(col) * m_ + col]);
      for (int r = col + 1; r < m_; ++r) {
        const double v = std::abs(a[static_cast<std::size_t>(r) * m_ + col]);
        if (v > best) best = v, piv = r;
      }
      if (best < 1e-12)
        throw Error("LP numerical error: singular basis (pivot " +
                    std::to_string(best) + " at column " + std::to_string(col) + ")");
      if (piv != col) {
        for (int k = 0; k < m_; ++k) {
          std::swap(a[static_cast<std::size_t>(piv) * m_ + k],
                    a[static_cast<std::size_t>(col) * m_ + k]);
          std::swap(inv[static_cast<std::size_t>(piv) * m_ + k],
                    inv[static_cast<std::size_t>(col) * m_ + k]);
        }
      }
      const double pivval = a[static_cast<std::size_t>(col) * m_ + col];
      for (int k = 0; k < m_; ++k) {
        a[static_cast<std::size_t>(col) * m_ + k] /= pivval;
        inv[static_cast<std::size_t>(col) * m_ + k] /= pivval;
      }
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = a[static_cast<std::size_t>(r) * m_ + col];
        if (f == 0) continue;
        for (int k = 0; k < m_; ++k) {
          a[static_cast<std::size_t>(r) * m_ + k] -=
              f * a[static_cast<std::size_t>(col) * m_ + k];
          inv[static_cast<std::size_t>(r) * m_ + k] -=
              f * inv[static_cast<std::size_t>(col) * m_ + k];
        }
      }
    }
    binv_ = std::move(inv);
  }

  // x_B = Binv (rhs - N x_N)
  void recompute_basics() {
    std::vector<double> r(rhs_);
    for (int j = 0; j < ncols_; ++j) {
      if (status_[j] == kBasic) continue;
      x_[j] = status_[j] == kAtLower ? lo_[j] : up_[j];
      if (!std::isfinite(x_[j])) x_[j] = 0;
      if (x_[j] == 0) continue;
      for (auto [row, coef] : cols_[j]) r[row] -= coef * x_[j];
    }
    for (int i = 0; i < m_; ++i) {
      double v = 0;
      const double* row = binv_.data() + static_cast<std::size_t>(i) * m_;
      for (int k = 0; k < m_; ++k) v += row[k] * r[k];
      x_[basic_[i]] = v;
    }
  }

  int m_, n_, ncols_;
  std::vector<double> lo_, up_, cost_, rhs_, x_, binv_;
  std::vector<std::vector<std::pair<int, double>>> cols_;
  std::vector<int> basic_, pos_in_basis_;
  std::vector<int8_t> status_;
};

void verify_solution(const MilpModel& model, LpSolution& sol) {
  for (const LinearConstraint& row : model.rows) {
    double act = 0, scale = std::max(1.0, std::abs(row.rhs));
    for (auto [id, coef] : row.coeffs) {
      act += coef * sol.values[id];
      scale = std::max(scale, std::abs(coef * sol.values[id]));
    }
    const double tol = kCheckTol * scale;
    const bool ok = row.sense == Sense::LE   ? act <= row.rhs + tol
                    : row.sense == Sense::GE ? act >= row.rhs - tol
                                             : std::abs(act - row.rhs) <= tol;
    if (!ok)
      throw Error("LP numerical error: row '" + row.tag + "' residual " +
                  std::to_string(act - row.rhs));
  }
}

}  // namespace

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

LpSolution solve_lp(const MilpModel& model, const std::vector<double>& lower,
                    const std::vector<double>& upper) {
  LpSolution sol;
  Reduced red = fold(model, lower, upper);
  if (red.infeasible) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }

  // Objective coefficients on variables eliminated from every row are
  // resolved by bound selection; an infinite bound there means unbounded.
  std::vector<double> obj_direct(model.vars.size(), 0.0);
  for (auto [id, coef] : model.objective) obj_direct[id] += coef;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (red.is_fixed[j] || red.model_to_col[j] >= 0) continue;
    const double lo = red.folded_lo[j], up = red.folded_up[j];
    double pick;
    if (obj_direct[j] > 0) pick = lo;
    else if (obj_direct[j] < 0) pick = up;
    else pick = std::isfinite(lo) ? lo : (std::isfinite(up) ? up : 0.0);
    if (!std::isfinite(pick)) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }
    red.fixed_value[j] = pick;
  }

  std::vector<double> reduced_values(red.cols.size(), 0.0);
  if (!red.row_coeffs.empty()) {
    Simplex simplex(red);
    const LpStatus status = simplex.run(sol.iterations);
    if (status != LpStatus::Optimal) {
      sol.status = status;
      return sol;
    }
    for (std::size_t c = 0; c < red.cols.size(); ++c)
      reduced_values[c] = simplex.value(static_cast<int>(c));
  }

  sol.values.assign(model.vars.size(), 0.0);
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (red.model_to_col[j] >= 0)
      sol.values[j] = reduced_values[red.model_to_col[j]];
    else
      sol.values[j] = red.fixed_value[j];
    // Clamp bound-level roundoff.
    sol.values[j] = std::min(std::max(sol.values[j], lower[j]), upper[j]);
  }
  sol.objective = 0;
  for (auto [id, coef] : model.objective) sol.objective += coef * sol.values[id];
  sol.status = LpStatus::Optimal;
  verify_solution(model, sol);
  return sol;
}

LpSolution solve_lp(const MilpModel& model) {
  std::vector<double> lower(model.vars.size()), upper(model.vars.size());
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    lower[j] = model.vars[j].lower;
    upper[j] = model.vars[j].upper;
  }
  return solve_lp(model, lower, upper);
}

}  // namespace dsr
