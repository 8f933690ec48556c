#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcsim/engine.hpp"
#include "dcsim/metrics.hpp"

namespace dcsim {

/// Pay-as-you-go pricing for the cost-per-task metric. The task execution
/// time is the mean hosted duration of accepted requests and the VM count is
/// the number of accepted requests.
struct Pricing {
    double price_per_hour = 0;
    double tracing_interval = 0;
    double task_interval = 0;
    double cores_per_vm = 1;
};

/// All metrics of one run. Utilizations are per-host time averages over
/// [0, horizon).
struct MetricReport {
    std::uint64_t seed = 0;
    std::string policy;
    std::string power_scheme;
    ImbalanceVariant variant = ImbalanceVariant::per_server;
    std::uint64_t workload_hash = 0;

    double requests = 0;
    double accepted = 0;
    double rejected = 0;
    double rejection_rate = 0;
    double cpu_avg = 0, mem_avg = 0, net_avg = 0;
    std::vector<double> ilb;  // per host
    double ibl_cpu = 0, ibl_mem = 0, ibl_net = 0;
    double ibl_tot = 0;
    double ibl_avg_pm = 0;
    double ibl_avg_cdc = 0;
    double makespan_load = 0;
    double makespan_time = 0;
    double utilization_efficiency = 1;
    std::vector<double> energy_per_pm;  // joules
    double energy_cdc = 0;
    double pms_used = 0;
    double power_on_time = 0;
    double migrations = 0;
    double horizon = 0;
    std::optional<double> cp;
    double wall_time_s = 0;  // not part of the deterministic outputs
};

MetricReport summarize(const SimulationResult& result, const PowerScheme& scheme,
                       const std::optional<Pricing>& pricing = std::nullopt,
                       ImbalanceVariant variant = ImbalanceVariant::per_server);

/// Per-host time-averaged snapshot over [0, horizon) (zeros when horizon is 0).
UtilizationSnapshot<double> run_snapshot(const SimulationResult& result);

std::string to_string(ImbalanceVariant v);
ImbalanceVariant parse_imbalance_variant(const std::string& name);

/// Numeric columns shared by per-run and aggregate outputs, in output order.
const std::vector<std::string>& metric_columns();
/// Value of a numeric column; nullopt for an unset cp.
std::optional<double> metric_value(const MetricReport& r, const std::string& column);

/// One header + one row per report.
std::string reports_csv(const std::vector<MetricReport>& reports);

/// Mean and 95% interval of every numeric column across runs.
struct AggregateColumn {
    std::string name;
    double mean = 0;
    std::optional<ConfidenceInterval> ci;  // unset when fewer than 2 runs
};

struct Aggregate {
    std::string label;
    std::size_t runs = 0;
    std::uint64_t workload_hash = 0;  // combined over all runs
    std::vector<AggregateColumn> columns;
};

Aggregate aggregate(const std::vector<MetricReport>& reports, std::string label);
/// One header + one row per aggregate; columns <m>_mean,<m>_s,<m>_ci_lo,<m>_ci_hi.
std::string aggregates_csv(const std::vector<Aggregate>& aggregates);

nlohmann::json to_json(const MetricReport& r, bool include_wall_time = false);
nlohmann::json to_json(const Aggregate& a);
nlohmann::json to_json(const SimulationResult& r);

}  // namespace dcsim
