#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dsr/builder.hpp"
#include "dsr/graph.hpp"
#include "dsr/harness.hpp"
#include "dsr/mps.hpp"
#include "dsr/plan.hpp"
#include "dsr/solver.hpp"
#include "dsr/validate.hpp"

namespace py = pybind11;
using namespace dsr;

namespace {

MilpModel build_default(const Feeder& f, const OutageScenario& sc, bool tight) {
  BuildOptions opts;
  opts.tight_flows = tight;
  return build(f, sc, enumerate_cycles(f), enumerate_nbs_paths(f),
               enumerate_bs_paths(f), opts);
}

}  // namespace

PYBIND11_MODULE(_dsr, m) {
  m.doc() = "Distribution-system restoration MILP toolkit";

  py::register_exception<Error>(m, "DsrError");

  py::enum_<BusKind>(m, "BusKind")
      .value("root", BusKind::Root)
      .value("load_fixed", BusKind::LoadFixed)
      .value("load_elastic", BusKind::LoadElastic)
      .value("gen_black_start", BusKind::GenBlackStart)
      .value("gen_non_black_start", BusKind::GenNonBlackStart)
      .value("junction", BusKind::Junction);
  py::enum_<EdgeKind>(m, "EdgeKind")
      .value("in_service", EdgeKind::InService)
      .value("out_of_service", EdgeKind::OutOfService)
      .value("switch", EdgeKind::Switch)
      .value("regulator", EdgeKind::Regulator);
  py::enum_<GenMode>(m, "GenMode")
      .value("PV", GenMode::PV)
      .value("PQ", GenMode::PQ);
  py::enum_<MilpStatus>(m, "MilpStatus")
      .value("optimal", MilpStatus::Optimal)
      .value("infeasible", MilpStatus::Infeasible)
      .value("gap_limit", MilpStatus::GapLimit)
      .value("node_limit", MilpStatus::NodeLimit)
      .value("time_limit", MilpStatus::TimeLimit);

  py::class_<Bus>(m, "Bus")
      .def_readonly("id", &Bus::id)
      .def_readonly("name", &Bus::name)
      .def_readonly("kind", &Bus::kind)
      .def_readonly("p_min", &Bus::p_min)
      .def_readonly("p_max", &Bus::p_max)
      .def_readonly("q_min", &Bus::q_min)
      .def_readonly("q_max", &Bus::q_max)
      .def_readonly("v_min", &Bus::v_min)
      .def_readonly("v_max", &Bus::v_max)
      .def_readonly("rating", &Bus::rating);
  py::class_<Edge>(m, "Edge")
      .def_readonly("id", &Edge::id)
      .def_readonly("name", &Edge::name)
      .def_readonly("from_bus", &Edge::from)
      .def_readonly("to_bus", &Edge::to)
      .def_readonly("kind", &Edge::kind)
      .def_readonly("r", &Edge::r)
      .def_readonly("x", &Edge::x)
      .def_readonly("normally_closed", &Edge::normally_closed);
  py::class_<Feeder>(m, "Feeder")
      .def_readonly("base_kva", &Feeder::base_kva)
      .def_readonly("base_kv", &Feeder::base_kv)
      .def_readonly("v0", &Feeder::v0)
      .def_readonly("lambda_", &Feeder::lambda)
      .def_readonly("buses", &Feeder::buses)
      .def_readonly("edges", &Feeder::edges)
      .def("total_nominal_load", &Feeder::total_nominal_load);
  py::class_<OutageScenario>(m, "OutageScenario")
      .def_readonly("failed_edges", &OutageScenario::failed_edges)
      .def_readonly("x0", &OutageScenario::x0)
      .def_readonly("y0", &OutageScenario::y0)
      .def_readonly("solar_avail", &OutageScenario::solar_avail);
  py::class_<EdgeIndicator>(m, "EdgeIndicator")
      .def_readonly("source", &EdgeIndicator::source)
      .def_readonly("target", &EdgeIndicator::target)
      .def_readonly("edges", &EdgeIndicator::edges);
  py::class_<MilpModel>(m, "MilpModel")
      .def_property_readonly("num_vars",
                             [](const MilpModel& mm) { return mm.vars.size(); })
      .def_property_readonly("num_rows",
                             [](const MilpModel& mm) { return mm.rows.size(); })
      .def("num_binary", &MilpModel::num_binary)
      .def("free_binaries", &MilpModel::free_binaries)
      .def("dump", &MilpModel::dump);
  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("gap_tol", &SolveOptions::gap_tol)
      .def_readwrite("time_limit_s", &SolveOptions::time_limit_s)
      .def_readwrite("node_limit", &SolveOptions::node_limit);
  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("objective", &SolveReport::objective)
      .def_readonly("bound", &SolveReport::bound)
      .def_readonly("gap", &SolveReport::gap)
      .def_readonly("nodes", &SolveReport::nodes)
      .def_readonly("wall_s", &SolveReport::wall_s)
      .def_readonly("status", &SolveReport::status)
      .def_readonly("values", &SolveReport::values);
  py::class_<RestorationPlan>(m, "RestorationPlan")
      .def_readonly("x", &RestorationPlan::x)
      .def_readonly("y", &RestorationPlan::y)
      .def_readonly("taps", &RestorationPlan::taps)
      .def_readonly("v", &RestorationPlan::v)
      .def_readonly("p", &RestorationPlan::p)
      .def_readonly("q", &RestorationPlan::q)
      .def_readonly("P", &RestorationPlan::P)
      .def_readonly("Q", &RestorationPlan::Q)
      .def_readonly("modes", &RestorationPlan::modes)
      .def_readonly("objective", &RestorationPlan::objective);
  py::class_<Violation>(m, "Violation")
      .def_readonly("check", &Violation::check)
      .def_readonly("entity", &Violation::entity)
      .def_readonly("magnitude", &Violation::magnitude);
  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("pass_", &ValidationReport::pass)
      .def_readonly("violations", &ValidationReport::violations)
      .def("to_json", &ValidationReport::to_json);
  py::class_<BatchSpec>(m, "BatchSpec")
      .def(py::init<>())
      .def_readwrite("k_values", &BatchSpec::k_values)
      .def_readwrite("n_per_k", &BatchSpec::n_per_k)
      .def_readwrite("seed", &BatchSpec::seed)
      .def_readwrite("solver", &BatchSpec::solver)
      .def_readwrite("lambda_override", &BatchSpec::lambda_override)
      .def_readwrite("workers", &BatchSpec::workers)
      .def_readwrite("zero_timing", &BatchSpec::zero_timing);
  py::class_<ScenarioRecord>(m, "ScenarioRecord")
      .def_readonly("k", &ScenarioRecord::k)
      .def_readonly("index", &ScenarioRecord::index)
      .def_readonly("failed", &ScenarioRecord::failed)
      .def_readonly("restored_pct", &ScenarioRecord::restored_pct)
      .def_readonly("objective", &ScenarioRecord::objective)
      .def_readonly("switch_changes", &ScenarioRecord::switch_changes)
      .def_readonly("wall_ms", &ScenarioRecord::wall_ms)
      .def_readonly("status", &ScenarioRecord::status)
      .def_readonly("valid", &ScenarioRecord::valid)
      .def_readonly("nodes", &ScenarioRecord::nodes);
  py::class_<KAggregate>(m, "KAggregate")
      .def_readonly("k", &KAggregate::k)
      .def_readonly("n", &KAggregate::n)
      .def_readonly("max_ms", &KAggregate::max_ms)
      .def_readonly("median_ms", &KAggregate::median_ms)
      .def_readonly("mean_restored_pct", &KAggregate::mean_restored_pct);
  py::class_<BatchResult>(m, "BatchResult")
      .def_readonly("records", &BatchResult::records)
      .def_readonly("aggregates", &BatchResult::aggregates);
  py::class_<CounterRng>(m, "CounterRng")
      .def(py::init<uint64_t, uint64_t, uint64_t>(), py::arg("seed"),
           py::arg("k") = 0, py::arg("index") = 0)
      .def("uniform", [](CounterRng& rng) { return rng.uniform(); })
      .def("below", &CounterRng::below);

  m.def("load_feeder", &load_feeder, py::arg("text"));
  m.def("serialize_feeder", [](const Feeder& f) { return serialize(f); });
  m.def("builtin_ieee37", &builtin_ieee37);
  m.def("derive_post_outage", &derive_post_outage, py::arg("feeder"),
        py::arg("failed"), py::arg("switch_state") = std::map<int, int>{});
  m.def("load_scenario", &load_scenario);
  m.def("serialize_scenario",
        [](const Feeder& f, const OutageScenario& sc) { return serialize(f, sc); });
  m.def("enumerate_cycles", &enumerate_cycles, py::arg("feeder"),
        py::arg("budget") = 10000);
  m.def("enumerate_nbs_paths", &enumerate_nbs_paths, py::arg("feeder"),
        py::arg("budget") = 100000);
  m.def("enumerate_bs_paths", &enumerate_bs_paths, py::arg("feeder"),
        py::arg("budget") = 100000);
  m.def("is_forest", &is_forest);
  m.def("energized_components", &energized_components);
  m.def("tap_ratio_table", &tap_ratio_table);
  m.def("build", &build_default, py::arg("feeder"), py::arg("scenario"),
        py::arg("tight") = false);
  m.def("solve_milp", &solve_milp, py::arg("model"),
        py::arg("options") = SolveOptions{});
  m.def("export_mps", &export_mps, py::arg("model"), py::arg("name") = "DSR");
  m.def("extract_plan", &extract_plan);
  m.def("plan_to_json", &plan_to_json);
  m.def("plan_from_json", &plan_from_json);
  m.def("validate", &validate, py::arg("feeder"), py::arg("scenario"),
        py::arg("plan"), py::arg("tol") = 1e-6);
  m.def("sample_scenario", &sample_scenario, py::arg("feeder"), py::arg("k"),
        py::arg("rng"), py::arg("widen_eligible") = false);
  m.def("restored_load_pct", &restored_load_pct);
  m.def("run_batch", &run_batch);
  m.def("records_csv", &records_csv);
  m.def("aggregates_csv", &aggregates_csv);
}
