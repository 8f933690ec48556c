#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dcsim/report.hpp"
#include "dcsim/scenario.hpp"

namespace dcsim {

/// Runs fn(0..n-1) on up to `jobs` threads. Each index runs exactly once;
/// callers write results by index so output never depends on completion order.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

struct RunOutput {
    std::optional<SimulationResult> result;  // kept when requested
    MetricReport report;
};

/// Repetition j uses seed `seed_base + j`. Outputs are ordered by seed.
std::vector<RunOutput> run_repetitions(const ScenarioFile& file, int repetitions, std::uint64_t seed_base, int jobs,
                                       bool keep_results = false);

struct RunPlan {
    std::string scenario_path;
    std::optional<int> repetitions;
    std::optional<std::uint64_t> seed_base;
    std::string out_dir = ".";
    int jobs = 1;
    bool csv = true;
    bool json = false;
    bool event_log = false;
};

/// Writes runs.csv + aggregate.csv (or report.json), and events_<seed>.csv
/// when event logs are requested. Returns the aggregate.
Aggregate execute_run(const RunPlan& plan, const EnvLookup& env);

/// One aggregate per policy over the same seed schedule, so every row sees
/// the same workloads.
std::vector<Aggregate> compare_policies(const ScenarioFile& file, const std::vector<std::string>& policies,
                                        int repetitions, std::uint64_t seed_base, int jobs);

struct BenchRow {
    std::size_t requests = 0;
    std::size_t pms = 0;
    double wall_s = 0;
    double peak_rss_mb = 0;  // approximate, from OS process accounting
    double accepted = 0;
};

/// The scenario `sim bench` uses for one (requests, pms) size: an even mix
/// of the three EC2 host types, uniform VM mix, about four concurrent VMs
/// per host, lif placement, linear power, no migration.
Scenario bench_scenario(std::size_t requests, std::size_t pms, std::uint64_t seed = 1);

/// Generates and simulates one size in a child process and reports its
/// wall time and peak resident memory. Falls back to in-process timing
/// (memory 0) where fork is unavailable.
BenchRow bench_one(std::size_t requests, std::size_t pms);

std::string bench_csv(const std::vector<BenchRow>& rows);

/// "1000x100,10000x1000" -> [(1000, 100), (10000, 1000)].
std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(const std::string& text);

}  // namespace dcsim
