#include "dsr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include "dsr/builder.hpp"
#include "dsr/graph.hpp"

namespace dsr {

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

OutageScenario sample_scenario(const Feeder& feeder, int k, CounterRng& rng,
                               bool widen_eligible) {
  std::vector<int> eligible;
  for (const Edge& e : feeder.edges) {
    const bool line = e.kind == EdgeKind::InService;
    const bool widened = widen_eligible && (e.kind == EdgeKind::Switch ||
                                            e.kind == EdgeKind::Regulator);
    if (line || widened) eligible.push_back(e.id);
  }
  std::sort(eligible.begin(), eligible.end());
  if (k < 0 || k > static_cast<int>(eligible.size()))
    throw Error("sample_scenario: k = " + std::to_string(k) +
                " exceeds the outage-eligible line count");
  // Partial Fisher-Yates over the id-sorted pool; first k entries fail.
  for (int i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }
  std::set<int> failed(eligible.begin(), eligible.begin() + k);
  OutageScenario sc = derive_post_outage(feeder, failed);
  for (int bus : feeder.nbs_buses())
    sc.solar_avail[bus] = rng.uniform() * feeder.buses[bus].rating;
  return sc;
}

double restored_load_pct(const Feeder& feeder, const OutageScenario& scenario,
                         const RestorationPlan& plan) {
  (void)scenario;
  const double total = feeder.total_nominal_load();
  if (total <= 0) return 100.0;
  double served = 0;
  for (const Bus& b : feeder.buses)
    if (b.is_load()) served += std::abs(plan.p[b.id]);
  return std::clamp(100.0 * served / total, 0.0, 100.0);
}

BatchResult run_batch(const Feeder& feeder, const BatchSpec& spec) {
  if (spec.n_per_k < 1) throw Error("run_batch: n_per_k must be >= 1");
  Feeder f = feeder;
  if (spec.lambda_override >= 0) f.lambda = spec.lambda_override;

  // The infrastructure graph is outage-independent; enumerate once.
  const auto cycles = enumerate_cycles(f);
  const auto nbs_paths = enumerate_nbs_paths(f);
  const auto bs_paths = enumerate_bs_paths(f);

  struct Task {
    int k, index;
  };
  std::vector<Task> tasks;
  for (int k : spec.k_values)
    for (int i = 0; i < spec.n_per_k; ++i) tasks.push_back({k, i});

  BatchResult result;
  result.records.resize(tasks.size());
  std::atomic<std::size_t> cursor{0};
  std::mutex error_mutex;
  std::string first_error;
  std::size_t first_error_task = tasks.size();

  auto worker = [&] {
    for (std::size_t t = cursor.fetch_add(1); t < tasks.size();
         t = cursor.fetch_add(1)) {
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error.empty() && first_error_task < t) return;
      }
      const auto [k, index] = tasks[t];
      try {
        CounterRng rng(spec.seed, static_cast<uint64_t>(k),
                       static_cast<uint64_t>(index));
        const OutageScenario sc = sample_scenario(f, k, rng, spec.widen_eligible);
        const MilpModel model = build(f, sc, cycles, nbs_paths, bs_paths);
        const auto t0 = std::chrono::steady_clock::now();
        const SolveReport report = solve_milp(model, spec.solver);
        const long wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
        if (report.status == MilpStatus::Infeasible)
          throw Error("scenario is infeasible although x = x0, y = y0 is "
                      "always admissible; scenario: " + serialize(f, sc));
        const RestorationPlan plan = extract_plan(f, model, report);
        const ValidationReport vr = validate(f, sc, plan);
        if (!vr.pass)
          throw Error("plan failed validation; scenario for replay: " +
                      serialize(f, sc) + "violations: " + vr.to_json());
        ScenarioRecord rec;
        rec.k = k;
        rec.index = index;
        rec.failed.assign(sc.failed_edges.begin(), sc.failed_edges.end());
        rec.restored_pct = restored_load_pct(f, sc, plan);
        rec.objective = report.objective;
        rec.switch_changes = 0;
        for (int pos : f.switch_positions())
          rec.switch_changes += plan.y[pos] != sc.y0[pos];
        rec.wall_ms = spec.zero_timing ? 0 : wall_ms;
        rec.status = report.status;
        rec.valid = vr.pass;
        rec.nodes = report.nodes;
        result.records[t] = std::move(rec);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty() || t < first_error_task) {
          first_error = "batch aborted at k=" + std::to_string(k) +
                        " index=" + std::to_string(index) + ": " + e.what();
          first_error_task = t;
        }
        return;
      }
    }
  };

  const int nworkers = std::max(1, spec.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < nworkers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  if (!first_error.empty()) throw Error(first_error);

  for (int k : spec.k_values) {
    KAggregate agg;
    agg.k = k;
    std::vector<long> times;
    double restored_sum = 0;
    for (const ScenarioRecord& rec : result.records) {
      if (rec.k != k) continue;
      ++agg.n;
      times.push_back(rec.wall_ms);
      agg.max_ms = std::max(agg.max_ms, rec.wall_ms);
      restored_sum += rec.restored_pct;
    }
    std::sort(times.begin(), times.end());
    const std::size_t n = times.size();
    agg.median_ms = n == 0 ? 0
                    : n % 2 ? static_cast<double>(times[n / 2])
                            : (times[n / 2 - 1] + times[n / 2]) / 2.0;
    agg.mean_restored_pct = agg.n ? restored_sum / agg.n : 0;
    result.aggregates.push_back(agg);
  }
  return result;
}

std::string records_csv(const BatchResult& result) {
  std::ostringstream os;
  os << "k,scenario_index,failed_edges,restored_pct,objective,switch_changes,"
        "wall_ms,status,valid\n";
  for (const ScenarioRecord& rec : result.records) {
    os << rec.k << "," << rec.index << ",";
    for (std::size_t i = 0; i < rec.failed.size(); ++i)
      os << (i ? ";" : "") << rec.failed[i];
    os << "," << fmt(rec.restored_pct) << "," << fmt(rec.objective) << ","
       << rec.switch_changes << "," << rec.wall_ms << ","
       << to_string(rec.status) << "," << (rec.valid ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string aggregates_csv(const BatchResult& result) {
  std::ostringstream os;
  os << "k,n,max_ms,median_ms,mean_restored_pct\n";
  for (const KAggregate& agg : result.aggregates) {
    os << agg.k << "," << agg.n << "," << agg.max_ms << ","
       << fmt(agg.median_ms, "%.3f") << "," << fmt(agg.mean_restored_pct)
       << "\n";
  }
  return os.str();
}

}  // namespace dsr
