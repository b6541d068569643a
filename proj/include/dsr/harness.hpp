#ifndef DSR_HARNESS_HPP
#define DSR_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dsr/plan.hpp"
#include "dsr/rng.hpp"
#include "dsr/solver.hpp"
#include "dsr/validate.hpp"

namespace dsr {

struct BatchSpec {
  std::vector<int> k_values{1, 2, 3, 4, 5};
  int n_per_k = 200;
  uint64_t seed = 1;
  SolveOptions solver;
  double lambda_override = -1;  // < 0: use the feeder's lambda
  int workers = 1;
  bool zero_timing = false;     // write 0 for wall-time columns (determinism runs)
  bool widen_eligible = false;  // include switches/regulators in the outage pool
};

struct ScenarioRecord {
  int k = 0;
  int index = 0;
  std::vector<int> failed;  // edge ids, ascending
  double restored_pct = 0;
  double objective = 0;
  int switch_changes = 0;
  long wall_ms = 0;
  MilpStatus status = MilpStatus::Optimal;
  bool valid = false;
  long nodes = 0;
};

struct KAggregate {
  int k = 0;
  int n = 0;
  long max_ms = 0;
  double median_ms = 0;
  double mean_restored_pct = 0;
};

struct BatchResult {
  std::vector<ScenarioRecord> records;      // ordered by (k, index)
  std::vector<KAggregate> aggregates;       // ordered by k
};

/// k distinct in-service lines drawn uniformly without replacement, solar
/// availability per NBS generator uniform on [0, rated], post-outage state
/// via derive_post_outage with default switch states.
OutageScenario sample_scenario(const Feeder& feeder, int k, CounterRng& rng,
                               bool widen_eligible = false);

/// 100 * (served load magnitude over load buses) / (total nominal load).
double restored_load_pct(const Feeder& feeder, const OutageScenario& scenario,
                         const RestorationPlan& plan);

/// Build -> solve -> validate every sampled scenario. Scenario (k, index)
/// uses the RNG stream (seed, k, index), so results are order- and
/// worker-independent. A validation failure aborts the batch with the
/// offending scenario serialized in the error message.
BatchResult run_batch(const Feeder& feeder, const BatchSpec& spec);

std::string records_csv(const BatchResult& result);
std::string aggregates_csv(const BatchResult& result);

}  // namespace dsr

#endif
