#include "dsr/builder.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dsr {

namespace {

std::string bus_tag(const Feeder& f, int bus) { return "bus " + f.buses[bus].name; }
std::string edge_tag(const Feeder& f, int pos) { return "edge " + f.edges[pos].name; }

std::vector<double> tap_ratios(int tap_count, double tap_step) {
  std::vector<double> c(tap_count);
  const int center = (tap_count + 1) / 2;
  for (int k = 1; k <= tap_count; ++k) {
    const double ratio = 1.0 + tap_step * (k - center);
    c[k - 1] = ratio * ratio;
  }
  return c;
}

}  // namespace

std::vector<double> tap_ratio_table() { return tap_ratios(33, 0.00625); }

int add_mccormick(MilpModel& model, int binary_var, int cont_var,
                  const std::string& name, const std::string& tag) {
  const Variable& b = model.vars.at(binary_var);
  const Variable& y = model.vars.at(cont_var);
  if (b.integrality != VarKind::Binary)
    throw Error("add_mccormick: " + b.name + " is not binary");
  if (!std::isfinite(y.lower) || !std::isfinite(y.upper))
    throw Error("add_mccormick: " + y.name + " has unbounded range");
  const double lo = y.lower, hi = y.upper;
  const int z = model.add_var(name, std::min(0.0, lo), std::max(0.0, hi),
                              VarKind::Continuous);
  model.add_row({{z, 1.0}, {binary_var, -lo}}, Sense::GE, 0.0, "1a- " + tag);
  model.add_row({{z, 1.0}, {binary_var, -hi}}, Sense::LE, 0.0, "1a+ " + tag);
  model.add_row({{z, 1.0}, {cont_var, -1.0}, {binary_var, -hi}}, Sense::GE, -hi,
                "1b- " + tag);
  model.add_row({{z, 1.0}, {cont_var, -1.0}, {binary_var, -lo}}, Sense::LE, -lo,
                "1b+ " + tag);
  return z;
}

MilpModel build(const Feeder& feeder, const OutageScenario& scenario,
                const std::vector<EdgeIndicator>& cycles,
                const std::vector<EdgeIndicator>& nbs_paths,
                const std::vector<EdgeIndicator>& bs_paths,
                const BuildOptions& options) {
  const std::size_t nb = feeder.buses.size();
  const std::size_t ne = feeder.edges.size();
  if (scenario.x0.size() != nb || scenario.y0.size() != ne)
    throw Error("build: scenario shape does not match the feeder");
  if (!scenario.x0[0]) throw Error("build: root must be energized in x0");

  // Failed edges are reclassified out of service for the model.
  std::vector<EdgeKind> ekind(ne);
  for (std::size_t pos = 0; pos < ne; ++pos) {
    const Edge& e = feeder.edges[pos];
    ekind[pos] = scenario.failed_edges.count(e.id) ? EdgeKind::OutOfService : e.kind;
    if (scenario.failed_edges.count(e.id) && scenario.y0[pos])
      throw Error("build: failed edge " + e.name + " listed as in service");
    if (ekind[pos] == EdgeKind::InService && !scenario.y0[pos])
      throw Error("build: in-service edge " + e.name + " has y0 = 0");
  }
  for (const auto& group : {&cycles, &nbs_paths, &bs_paths})
    for (const EdgeIndicator& ind : *group)
      if (ind.bits.size() != ne)
        throw Error("build: indicator shape does not match the feeder");

  // Scenario override of the available solar capacity.
  std::vector<double> p_max_eff(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    p_max_eff[i] = feeder.buses[i].p_max;
    if (feeder.buses[i].kind == BusKind::GenNonBlackStart) {
      auto it = scenario.solar_avail.find(static_cast<int>(i));
      if (it != scenario.solar_avail.end()) p_max_eff[i] = it->second;
    }
  }

  MilpModel m;
  SymbolTable& sym = m.symbols;
  sym.x.assign(nb, -1);
  sym.v.assign(nb, -1);
  sym.p.assign(nb, -1);
  sym.q.assign(nb, -1);
  sym.y.assign(ne, -1);
  sym.P.assign(ne, -1);
  sym.Q.assign(ne, -1);
  sym.z_v_from.assign(ne, -1);
  sym.z_v_to.assign(ne, -1);
  sym.z_P.assign(ne, -1);
  sym.z_Q.assign(ne, -1);
  sym.s.assign(ne, -1);

  // --- variables ---
  for (std::size_t i = 0; i < nb; ++i) {
    const Bus& b = feeder.buses[i];
    // x >= x0 enters as the lower bound; the root is pinned to 1.
    const double lo = (i == 0) ? 1.0 : static_cast<double>(scenario.x0[i]);
    sym.x[i] = m.add_var("x[" + b.name + "]", lo, 1.0, VarKind::Binary);
  }
  for (std::size_t i = 0; i < nb; ++i) {
    const Bus& b = feeder.buses[i];
    const double lo = (i == 0) ? feeder.v0 : 0.0;
    const double hi = (i == 0) ? feeder.v0 : b.v_max;
    sym.v[i] = m.add_var("v[" + b.name + "]", lo, hi, VarKind::Continuous);
  }
  for (std::size_t i = 0; i < nb; ++i) {
    const Bus& b = feeder.buses[i];
    sym.p[i] = m.add_var("p[" + b.name + "]", std::min(0.0, b.p_min),
                         std::max(0.0, p_max_eff[i]), VarKind::Continuous);
    sym.q[i] = m.add_var("q[" + b.name + "]", std::min(0.0, b.q_min),
                         std::max(0.0, b.q_max), VarKind::Continuous);
  }
  for (std::size_t pos = 0; pos < ne; ++pos) {
    const Edge& e = feeder.edges[pos];
    double lo = 0, hi = 1;
    if (ekind[pos] == EdgeKind::OutOfService) lo = hi = 0;
    if (ekind[pos] == EdgeKind::InService || ekind[pos] == EdgeKind::Regulator)
      lo = hi = 1;
    sym.y[pos] = m.add_var("y[" + e.name + "]", lo, hi, VarKind::Binary);
  }
  for (std::size_t pos = 0; pos < ne; ++pos) {
    const Edge& e = feeder.edges[pos];
    double Plo, Phi, Qlo, Qhi;
    if (ekind[pos] == EdgeKind::OutOfService) {
      Plo = Phi = Qlo = Qhi = 0;
    } else if (ekind[pos] == EdgeKind::Switch) {
      Plo = std::min(0.0, e.P_min);
      Phi = std::max(0.0, e.P_max);
      Qlo = std::min(0.0, e.Q_min);
      Qhi = std::max(0.0, e.Q_max);
    } else {
      Plo = e.P_min;
      Phi = e.P_max;
      Qlo = e.Q_min;
      Qhi = e.Q_max;
    }
    sym.P[pos] = m.add_var("P[" + e.name + "]", Plo, Phi, VarKind::Continuous);
    sym.Q[pos] = m.add_var("Q[" + e.name + "]", Qlo, Qhi, VarKind::Continuous);
  }

  // --- Eq. (2): status-gated voltage and injection boxes ---
  for (std::size_t i = 0; i < nb; ++i) {
    const Bus& b = feeder.buses[i];
    const std::string t = bus_tag(feeder, static_cast<int>(i));
    m.add_row({{sym.v[i], 1.0}, {sym.x[i], -b.v_min}}, Sense::GE, 0, "2b- " + t);
    m.add_row({{sym.v[i], 1.0}, {sym.x[i], -b.v_max}}, Sense::LE, 0, "2b+ " + t);
    m.add_row({{sym.p[i], 1.0}, {sym.x[i], -b.p_min}}, Sense::GE, 0, "2c- " + t);
    m.add_row({{sym.p[i], 1.0}, {sym.x[i], -p_max_eff[i]}}, Sense::LE, 0, "2c+ " + t);
    m.add_row({{sym.q[i], 1.0}, {sym.x[i], -b.q_min}}, Sense::GE, 0, "2d- " + t);
    m.add_row({{sym.q[i], 1.0}, {sym.x[i], -b.q_max}}, Sense::LE, 0, "2d+ " + t);
  }

  // --- Eq. (3d-3e): status-gated flow boxes ---
  for (std::size_t pos = 0; pos < ne; ++pos) {
    const Edge& e = feeder.edges[pos];
    const std::string t = edge_tag(feeder, static_cast<int>(pos));
    m.add_row({{sym.P[pos], 1.0}, {sym.y[pos], -e.P_min}}, Sense::GE, 0, "3d- " + t);
    m.add_row({{sym.P[pos], 1.0}, {sym.y[pos], -e.P_max}}, Sense::LE, 0, "3d+ " + t);
    m.add_row({{sym.Q[pos], 1.0}, {sym.y[pos], -e.Q_min}}, Sense::GE, 0, "3e- " + t);
    m.add_row({{sym.Q[pos], 1.0}, {sym.y[pos], -e.Q_max}}, Sense::LE, 0, "3e+ " + t);
  }

  // --- Eq. (4): nodal complex power balance ---
  for (std::size_t i = 0; i < nb; ++i) {
    std::vector<std::pair<int, double>> prow{{sym.p[i], 1.0}};
    std::vector<std::pair<int, double>> qrow{{sym.q[i], 1.0}};
    for (std::size_t pos = 0; pos < ne; ++pos) {
      const Edge& e = feeder.edges[pos];
      if (e.from == static_cast<int>(i)) {
        prow.push_back({sym.P[pos], -1.0});
        qrow.push_back({sym.Q[pos], -1.0});
      } else if (e.to == static_cast<int>(i)) {
        prow.push_back({sym.P[pos], 1.0});
        qrow.push_back({sym.Q[pos], 1.0});
      }
    }
    m.add_row(std::move(prow), Sense::EQ, 0, "4a " + bus_tag(feeder, (int)i));
    m.add_row(std::move(qrow), Sense::EQ, 0, "4b " + bus_tag(feeder, (int)i));
  }

  // --- Eq. (5): voltage drop along closed non-regulator edges ---
  // Powers are kW on a kVA base while v is per-unit squared.
  const double ps = 2.0 / feeder.base_kva;
  for (std::size_t pos = 0; pos < ne; ++pos) {
    const Edge& e = feeder.edges[pos];
    if (ekind[pos] == EdgeKind::Regulator || ekind[pos] == EdgeKind::OutOfService)
      continue;
    const std::string t = edge_tag(feeder, static_cast<int>(pos));
    if (ekind[pos] == EdgeKind::InService) {
      m.add_row({{sym.v[e.from], 1.0},
                 {sym.v[e.to], -1.0},
                 {sym.P[pos], -e.r * ps},
                 {sym.Q[pos], -e.x * ps}},
                Sense::EQ, 0, "5 " + t);
      continue;
    }
    // Switch edge: every bilinear product gets its own envelope.
    sym.z_v_from[pos] = add_mccormick(m, sym.y[pos], sym.v[e.from],
                                      "z[yv:" + e.name + ":from]", t + " yv_i");
    sym.z_v_to[pos] = add_mccormick(m, sym.y[pos], sym.v[e.to],
                                    "z[yv:" + e.name + ":to]", t + " yv_j");
    int zP = sym.P[pos], zQ = sym.Q[pos];
    if (!options.tight_flows) {
      zP = sym.z_P[pos] = add_mccormick(m, sym.y[pos], sym.P[pos],
                                        "z[yP:" + e.name + "]", t + " yP");
      zQ = sym.z_Q[pos] = add_mccormick(m, sym.y[pos], sym.Q[pos],
                                        "z[yQ:" + e.name + "]", t + " yQ");
    }
    m.add_row({{sym.z_v_from[pos], 1.0},
               {sym.z_v_to[pos], -1.0},
               {zP, -e.r * ps},
               {zQ, -e.x * ps}},
              Sense::EQ, 0, "5 " + t);
  }

  // --- Eqs. (6)-(7): exact regulator model ---
  const std::vector<double> ratios = tap_ratios(feeder.tap_count, feeder.tap_step);
  for (std::size_t pos = 0; pos < ne; ++pos) {
    if (ekind[pos] != EdgeKind::Regulator) continue;
    const Edge& e = feeder.edges[pos];
    const std::string t = edge_tag(feeder, static_cast<int>(pos));
    std::vector<int>& taps = sym.taps[static_cast<int>(pos)];
    std::vector<int>& tap_z = sym.tap_z[static_cast<int>(pos)];
    std::vector<std::pair<int, double>> one_hot;
    std::vector<std::pair<int, double>> link{{sym.v[e.to], 1.0}};
    for (int k = 1; k <= feeder.tap_count; ++k) {
      const int tv = m.add_var("t[" + e.name + "," + std::to_string(k) + "]",
                               0, 1, VarKind::Binary);
      taps.push_back(tv);
      one_hot.push_back({tv, 1.0});
      const int zv = add_mccormick(m, tv, sym.v[e.from],
                                   "z[tv:" + e.name + "," + std::to_string(k) + "]",
                                   t + " tap " + std::to_string(k));
      tap_z.push_back(zv);
      link.push_back({zv, -ratios[k - 1]});
    }
    m.add_row(std::move(one_hot), Sense::EQ, 1, "7b " + t);
    m.add_row(std::move(link), Sense::EQ, 0, "7a " + t);
  }

  // --- Eq. (8): cycle-elimination inequalities ---
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    std::vector<std::pair<int, double>> row;
    for (int pos : cycles[c].edges) row.push_back({sym.y[pos], 1.0});
    m.add_row(std::move(row), Sense::LE,
              static_cast<double>(cycles[c].edges.size()) - 1.0,
              "8 cycle " + std::to_string(c));
  }

  // --- Eq. (9): closed edges propagate the bus status ---
  for (std::size_t pos = 0; pos < ne; ++pos) {
    const Edge& e = feeder.edges[pos];
    const std::string t = edge_tag(feeder, static_cast<int>(pos));
    m.add_row({{sym.x[e.from], 1.0}, {sym.x[e.to], -1.0}, {sym.y[pos], 1.0}},
              Sense::LE, 1, "9- " + t);
    m.add_row({{sym.x[e.to], 1.0}, {sym.x[e.from], -1.0}, {sym.y[pos], 1.0}},
              Sense::LE, 1, "9+ " + t);
  }

  auto path_dead = [&](const EdgeIndicator& path) {
    for (int pos : path.edges)
      if (ekind[pos] == EdgeKind::OutOfService) return true;
    return false;
  };
  auto path_name = [&](const EdgeIndicator& path, std::size_t idx) {
    return feeder.buses[path.source].name + ">" + feeder.buses[path.target].name +
           "#" + std::to_string(idx);
  };

  // --- Eq. (10): non-black-start reachability ---
  sym.delta.assign(nbs_paths.size(), -1);
  for (std::size_t k = 0; k < nbs_paths.size(); ++k) {
    const EdgeIndicator& path = nbs_paths[k];
    // A path through an out-of-service edge can never energize; pin its
    // indicator so the search does not branch on it.
    const double hi = path_dead(path) ? 0.0 : 1.0;
    sym.delta[k] =
        m.add_var("delta[" + path_name(path, k) + "]", 0, hi, VarKind::Binary);
    std::vector<std::pair<int, double>> row{
        {sym.delta[k], static_cast<double>(path.edges.size())}};
    for (int pos : path.edges) row.push_back({sym.y[pos], -1.0});
    m.add_row(std::move(row), Sense::LE, 0, "10b path " + path_name(path, k));
  }
  for (std::size_t i = 0; i < nb; ++i) {
    if (feeder.buses[i].kind != BusKind::GenNonBlackStart) continue;
    std::vector<std::pair<int, double>> row{{sym.x[i], 1.0}};
    for (std::size_t k = 0; k < nbs_paths.size(); ++k)
      if (nbs_paths[k].source == static_cast<int>(i))
        row.push_back({sym.delta[k], -1.0});
    m.add_row(std::move(row), Sense::LE, 0, "10c " + bus_tag(feeder, (int)i));
  }

  // --- Eq. (11): black-start path indicators ---
  sym.eps_path.assign(bs_paths.size(), -1);
  for (std::size_t l = 0; l < bs_paths.size(); ++l) {
    const EdgeIndicator& path = bs_paths[l];
    const double len = static_cast<double>(path.edges.size());
    const double hi = path_dead(path) ? 0.0 : 1.0;
    sym.eps_path[l] =
        m.add_var("eps_path[" + path_name(path, l) + "]", 0, hi, VarKind::Binary);
    std::vector<std::pair<int, double>> lo_row{{sym.eps_path[l], -1.0}};
    for (int pos : path.edges) lo_row.push_back({sym.y[pos], 1.0});
    m.add_row(std::move(lo_row), Sense::LE, len - 1.0,
              "11- path " + path_name(path, l));
    // Denominator cleared to keep integer-friendly coefficients.
    std::vector<std::pair<int, double>> hi_row{{sym.eps_path[l], len}};
    for (int pos : path.edges) hi_row.push_back({sym.y[pos], -1.0});
    m.add_row(std::move(hi_row), Sense::LE, 0, "11+ path " + path_name(path, l));
  }

  // --- Eq. (12): PV/PQ coordination ---
  for (std::size_t i = 0; i < nb; ++i) {
    if (feeder.buses[i].kind != BusKind::GenBlackStart) continue;
    const std::string t = bus_tag(feeder, static_cast<int>(i));
    const int eps =
        m.add_var("eps_mode[" + feeder.buses[i].name + "]", 0, 1, VarKind::Binary);
    sym.eps_mode[static_cast<int>(i)] = eps;
    std::vector<std::pair<int, double>> sum_row{{eps, 1.0}};
    for (std::size_t l = 0; l < bs_paths.size(); ++l) {
      if (bs_paths[l].source != static_cast<int>(i)) continue;
      m.add_row({{sym.eps_path[l], 1.0}, {eps, -1.0}}, Sense::LE, 0,
                "12b- path " + path_name(bs_paths[l], l));
      sum_row.push_back({sym.eps_path[l], -1.0});
    }
    m.add_row(std::move(sum_row), Sense::LE, 0, "12b+ " + t);
    // |v_i - v0 x_i| <= eps_i v0: reduces to the PV pin v_i = v0 for an
    // energized island reference and stays satisfiable for a dead bus.
    m.add_row({{sym.v[i], 1.0}, {sym.x[i], -feeder.v0}, {eps, -feeder.v0}},
              Sense::LE, 0, "12c+ " + t);
    m.add_row({{sym.v[i], -1.0}, {sym.x[i], feeder.v0}, {eps, -feeder.v0}},
              Sense::LE, 0, "12c- " + t);
  }

  // --- Eq. (13): switching-change magnitudes ---
  for (std::size_t pos = 0; pos < ne; ++pos) {
    if (feeder.edges[pos].kind != EdgeKind::Switch) continue;
    const Edge& e = feeder.edges[pos];
    const std::string t = edge_tag(feeder, static_cast<int>(pos));
    sym.s[pos] = m.add_var("s[" + e.name + "]", 0, 1, VarKind::Continuous);
    const double y0 = static_cast<double>(scenario.y0[pos]);
    m.add_row({{sym.s[pos], 1.0}, {sym.y[pos], -1.0}}, Sense::GE, -y0, "13s- " + t);
    m.add_row({{sym.s[pos], 1.0}, {sym.y[pos], 1.0}}, Sense::GE, y0, "13s+ " + t);
  }

  // Objective: served load (p <= 0 on load buses) plus switching penalty.
  for (std::size_t i = 0; i < nb; ++i) {
    const Bus& b = feeder.buses[i];
    if (i == 0 || b.is_gen()) continue;
    m.objective.push_back({sym.p[i], 1.0});
  }
  for (std::size_t pos = 0; pos < ne; ++pos)
    if (sym.s[pos] >= 0) m.objective.push_back({sym.s[pos], feeder.lambda});

  return m;
}

}  // namespace dsr
