#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dsr/builder.hpp"
#include "dsr/graph.hpp"
#include "dsr/harness.hpp"
#include "dsr/mps.hpp"
#include "dsr/plan.hpp"
#include "dsr/solver.hpp"
#include "dsr/validate.hpp"
#include "json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitLimit = 4;
constexpr int kExitInvalid = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dsr::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw dsr::Error("cannot write '" + path + "'");
  out << content;
}

struct FeederArgs {
  std::string path;
  bool builtin = false;
  double lambda = -1;

  dsr::Feeder load() const {
    dsr::Feeder f = builtin ? dsr::builtin_ieee37() : dsr::load_feeder(read_file(path));
    if (lambda >= 0) f.lambda = lambda;
    return f;
  }
};

struct ScenarioArgs {
  std::string path;
  std::vector<int> fail;

  dsr::OutageScenario load(const dsr::Feeder& f) const {
    if (!path.empty()) return dsr::load_scenario(f, read_file(path));
    return dsr::derive_post_outage(f, {fail.begin(), fail.end()});
  }
};

void add_feeder_options(CLI::App* cmd, FeederArgs& args) {
  auto* path = cmd->add_option("--feeder", args.path, "feeder JSON file");
  auto* builtin = cmd->add_flag("--builtin-ieee37", args.builtin,
                                "use the built-in modified IEEE-37 feeder");
  path->excludes(builtin);
  builtin->excludes(path);
  cmd->add_option("--lambda", args.lambda, "switching-penalty override");
  cmd->callback([cmd, &args] {
    if (args.path.empty() && !args.builtin)
      throw CLI::ValidationError(cmd->get_name(),
                                 "exactly one of --feeder/--builtin-ieee37 required");
  });
}

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
  auto* path = cmd->add_option("--scenario", args.path, "scenario JSON file");
  auto* fail = cmd->add_option("--fail", args.fail,
                               "failed edge ids (comma separated)")
                   ->delimiter(',');
  path->excludes(fail);
  fail->excludes(path);
}

void add_solver_options(CLI::App* cmd, dsr::SolveOptions& opts) {
  cmd->add_option("--gap-tol", opts.gap_tol, "relative MIP gap tolerance");
  cmd->add_option("--time-limit", opts.time_limit_s, "wall-clock limit, seconds");
  cmd->add_option("--node-limit", opts.node_limit, "branch-and-bound node limit");
}

int status_exit_code(dsr::MilpStatus status) {
  switch (status) {
    case dsr::MilpStatus::Optimal:
    case dsr::MilpStatus::GapLimit:
      return kExitOk;
    case dsr::MilpStatus::Infeasible:
      return kExitInfeasible;
    case dsr::MilpStatus::NodeLimit:
    case dsr::MilpStatus::TimeLimit:
      return kExitLimit;
  }
  return kExitInternal;
}

int run_solve(const FeederArgs& fa, const ScenarioArgs& sa,
              const dsr::SolveOptions& opts, bool tight, bool as_json,
              const std::string& out_path, const std::string& dump_path) {
  const dsr::Feeder f = fa.load();
  const dsr::OutageScenario sc = sa.load(f);
  dsr::BuildOptions build_opts;
  build_opts.tight_flows = tight;
  const dsr::MilpModel model =
      dsr::build(f, sc, dsr::enumerate_cycles(f), dsr::enumerate_nbs_paths(f),
                 dsr::enumerate_bs_paths(f), build_opts);
  if (!dump_path.empty()) write_file(dump_path, model.dump());
  const dsr::SolveReport report = dsr::solve_milp(model, opts);
  if (report.status == dsr::MilpStatus::Infeasible) {
    std::cerr << "infeasible after " << report.nodes << " nodes\n";
    return kExitInfeasible;
  }
  if (report.values.empty()) {
    std::cerr << "no incumbent found: " << to_string(report.status) << "\n";
    return status_exit_code(report.status);
  }
  const dsr::RestorationPlan plan = dsr::extract_plan(f, model, report);
  const dsr::ValidationReport vr = dsr::validate(f, sc, plan);
  const auto islands = dsr::energized_components(f, plan.x, plan.y);
  const double restored = dsr::restored_load_pct(f, sc, plan);
  int switch_changes = 0;
  for (int pos : f.switch_positions()) switch_changes += plan.y[pos] != sc.y0[pos];

  if (!out_path.empty()) write_file(out_path, dsr::plan_to_json(f, plan));

  if (as_json) {
    nlohmann::ordered_json doc;
    doc["status"] = to_string(report.status);
    doc["objective"] = report.objective;
    doc["bound"] = report.bound;
    doc["gap"] = report.gap;
    doc["nodes"] = report.nodes;
    doc["wall_s"] = report.wall_s;
    doc["restored_pct"] = restored;
    doc["switch_changes"] = switch_changes;
    doc["islands"] = islands.size();
    doc["valid"] = vr.pass;
    doc["plan"] = nlohmann::ordered_json::parse(dsr::plan_to_json(f, plan));
    doc["validation"] = nlohmann::ordered_json::parse(vr.to_json());
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "status:         " << to_string(report.status) << "\n";
    std::cout << "objective:      " << report.objective << "\n";
    std::cout << "nodes:          " << report.nodes << "\n";
    std::cout << "restored:       " << restored << "%\n";
    std::cout << "switch changes: " << switch_changes << "\n";
    std::cout << "islands:        " << islands.size() << "\n";
    for (const auto& island : islands) {
      std::cout << "  island";
      for (int bus : island)
        if (f.buses[bus].kind == dsr::BusKind::GenBlackStart &&
            plan.modes.count(bus))
          std::cout << (plan.modes.at(bus) == dsr::GenMode::PV ? " PV:" : " PQ:")
                    << f.buses[bus].name;
      std::cout << " (" << island.size() << " buses, root "
                << (island.front() == 0 ? "yes" : "no") << ")\n";
    }
    for (auto [edge_id, k] : plan.taps)
      std::cout << "tap " << f.edge_by_id(edge_id).name << ": " << k << "\n";
    std::cout << "valid:          " << (vr.pass ? "yes" : "NO") << "\n";
  }
  if (!vr.pass) {
    std::cerr << vr.to_json();
    return kExitInvalid;
  }
  return status_exit_code(report.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-step distribution-system restoration toolkit"};
  app.require_subcommand(1);

  FeederArgs fa_solve, fa_batch, fa_validate, fa_mps, fa_graph;
  ScenarioArgs sa_solve, sa_validate, sa_mps;
  dsr::SolveOptions opts_solve, opts_batch;
  bool tight_solve = false, tight_mps = false, json_solve = false,
       json_graph = false;
  std::string out_solve, dump_solve, out_mps, plan_path;
  dsr::BatchSpec batch;
  std::string batch_out = "records.csv", batch_agg_out = "aggregates.csv";

  CLI::App* solve = app.add_subcommand("solve", "solve one restoration instance");
  add_feeder_options(solve, fa_solve);
  add_scenario_options(solve, sa_solve);
  add_solver_options(solve, opts_solve);
  solve->add_flag("--tight", tight_solve, "reuse P,Q in switch drop rows");
  solve->add_flag("--json", json_solve, "machine-readable output");
  solve->add_option("--out", out_solve, "write the plan JSON here");
  solve->add_option("--dump-model", dump_solve, "write the constraint listing here");

  CLI::App* batch_cmd = app.add_subcommand("batch", "random-outage batch run");
  add_feeder_options(batch_cmd, fa_batch);
  add_solver_options(batch_cmd, opts_batch);
  batch_cmd->add_option("--k", batch.k_values, "outage sizes")->delimiter(',');
  batch_cmd->add_option("--n-per-k", batch.n_per_k, "scenarios per k");
  batch_cmd->add_option("--seed", batch.seed, "batch seed");
  if (const char* env = std::getenv("DSR_WORKERS")) batch.workers = std::atoi(env);
  batch_cmd->add_option("--workers", batch.workers, "parallel scenario workers");
  batch_cmd->add_flag("--zero-timing", batch.zero_timing,
                      "write zeros for wall-time columns");
  batch_cmd->add_flag("--widen-eligible", batch.widen_eligible,
                      "let switches and regulators fail too");
  batch_cmd->add_option("--out", batch_out, "per-scenario CSV path");
  batch_cmd->add_option("--aggregate-out", batch_agg_out, "per-k aggregate CSV path");

  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check a plan against the semantics");
  add_feeder_options(validate_cmd, fa_validate);
  add_scenario_options(validate_cmd, sa_validate);
  validate_cmd->add_option("--plan", plan_path, "plan JSON file")->required();

  CLI::App* mps = app.add_subcommand("export-mps", "write the model as MPS");
  add_feeder_options(mps, fa_mps);
  add_scenario_options(mps, sa_mps);
  mps->add_flag("--tight", tight_mps, "reuse P,Q in switch drop rows");
  mps->add_option("--out", out_mps, "output path (default stdout)");

  CLI::App* graph =
      app.add_subcommand("inspect-graph", "enumerate cycles and coordination paths");
  add_feeder_options(graph, fa_graph);
  graph->add_flag("--json", json_graph, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve)
      return run_solve(fa_solve, sa_solve, opts_solve, tight_solve, json_solve,
                       out_solve, dump_solve);

    if (*batch_cmd) {
      batch.solver = opts_batch;
      if (fa_batch.lambda >= 0) batch.lambda_override = fa_batch.lambda;
      const dsr::Feeder f = fa_batch.load();
      const dsr::BatchResult result = dsr::run_batch(f, batch);
      write_file(batch_out, dsr::records_csv(result));
      write_file(batch_agg_out, dsr::aggregates_csv(result));
      for (const dsr::KAggregate& agg : result.aggregates)
        std::cout << "k=" << agg.k << " n=" << agg.n << " max_ms=" << agg.max_ms
                  << " median_ms=" << agg.median_ms
                  << " mean_restored=" << agg.mean_restored_pct << "%\n";
      return kExitOk;
    }

    if (*validate_cmd) {
      const dsr::Feeder f = fa_validate.load();
      const dsr::OutageScenario sc = sa_validate.load(f);
      const dsr::RestorationPlan plan =
          dsr::plan_from_json(f, read_file(plan_path));
      const dsr::ValidationReport vr = dsr::validate(f, sc, plan);
      std::cout << vr.to_json();
      return vr.pass ? kExitOk : kExitInvalid;
    }

    if (*mps) {
      const dsr::Feeder f = fa_mps.load();
      const dsr::OutageScenario sc = sa_mps.load(f);
      dsr::BuildOptions build_opts;
      build_opts.tight_flows = tight_mps;
      const dsr::MilpModel model =
          dsr::build(f, sc, dsr::enumerate_cycles(f), dsr::enumerate_nbs_paths(f),
                     dsr::enumerate_bs_paths(f), build_opts);
      const std::string text = dsr::export_mps(model);
      if (out_mps.empty())
        std::cout << text;
      else
        write_file(out_mps, text);
      return kExitOk;
    }

    if (*graph) {
      const dsr::Feeder f = fa_graph.load();
      const auto cycles = dsr::enumerate_cycles(f);
      const auto nbs = dsr::enumerate_nbs_paths(f);
      const auto bs = dsr::enumerate_bs_paths(f);
      auto edge_ids = [&](const dsr::EdgeIndicator& ind) {
        std::vector<int> ids;
        for (int pos : ind.edges) ids.push_back(f.edges[pos].id);
        return ids;
      };
      if (json_graph) {
        nlohmann::ordered_json doc;
        doc["cycles"] = nlohmann::ordered_json::array();
        for (const auto& c : cycles) doc["cycles"].push_back(edge_ids(c));
        auto path_entry = [&](const dsr::EdgeIndicator& p) {
          nlohmann::ordered_json jp;
          jp["from"] = f.buses[p.source].name;
          jp["to"] = f.buses[p.target].name;
          jp["edges"] = edge_ids(p);
          return jp;
        };
        doc["nbs_paths"] = nlohmann::ordered_json::array();
        for (const auto& p : nbs) doc["nbs_paths"].push_back(path_entry(p));
        doc["bs_paths"] = nlohmann::ordered_json::array();
        for (const auto& p : bs) doc["bs_paths"].push_back(path_entry(p));
        std::cout << doc.dump(2) << "\n";
      } else {
        std::cout << "cycles: " << cycles.size() << "\n";
        for (const auto& c : cycles) {
          std::cout << "  cycle:";
          for (int id : edge_ids(c)) std::cout << " " << id;
          std::cout << "\n";
        }
        auto print_paths = [&](const char* label, const auto& paths) {
          std::cout << label << ": " << paths.size() << "\n";
          for (const auto& p : paths) {
            std::cout << "  path " << f.buses[p.source].name << "->"
                      << f.buses[p.target].name << ":";
            for (int id : edge_ids(p)) std::cout << " " << id;
            std::cout << "\n";
          }
        };
        print_paths("nbs-paths", nbs);
        print_paths("bs-paths", bs);
      }
      return kExitOk;
    }
  } catch (const dsr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
