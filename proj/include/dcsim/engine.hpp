#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dcsim/catalog.hpp"
#include "dcsim/policies.hpp"
#include "dcsim/power.hpp"
#include "dcsim/state.hpp"
#include "dcsim/workload.hpp"

namespace dcsim {

/// Everything one simulation needs. Repetition j of a batch runs with
/// `seed + j`; the seed drives both workload generation and the policy's
/// random stream.
struct Scenario {
    Catalog catalog = builtin_ec2_catalog();
    std::vector<std::pair<int, int>> pm_fleet;                   // (pm_type_id, count), ids assigned in order
    std::variant<WorkloadSpec, std::vector<VmRequest>> workload;  // generated or fixed trace
    double slot_length = 1.0;
    std::optional<double> migration_interval;
    std::optional<double> horizon;  // metrics window end; at least the last departure
    PolicySpec policy;
    PowerScheme power;
    int repetitions = 1;
    std::uint64_t seed = 0;
    bool record_events = false;
};

/// Throws ValidationError describing the first problem found.
void validate_scenario(const Scenario& scenario);

/// Host types of the fleet in pm_id order.
std::vector<PmType> expand_fleet(const Scenario& scenario);

/// The request list a run with `seed` would see.
std::vector<VmRequest> materialize_workload(const Scenario& scenario, std::uint64_t seed);

/// Demand of one request on one host, as fractions of that host's capacity:
/// scalar requests demand `capacity` of every dimension.
Resources request_demand(const VmRequest& request, const Catalog& catalog, const PmType& host);

struct PmRecord {
    int pm_id = 0;
    PmType type;
    bool ever_used = false;
    UsageHistory history;
    std::vector<Interval> power_on;
};

struct Rejection {
    std::int64_t request_id = 0;
    std::string reason;
    friend bool operator==(const Rejection&, const Rejection&) = default;
};

/// One row of the optional event log (`time,event_kind,request_id,pm_id,detail`).
struct EventRecord {
    double time = 0;
    std::string kind;  // arrive | reject | depart | migrate
    std::int64_t request_id = 0;
    int pm_id = 0;
    std::string detail;
};

struct SimulationResult {
    std::uint64_t seed = 0;
    std::string policy;
    PowerScheme power;
    double slot_length = 1.0;
    std::uint64_t workload_hash = 0;
    std::size_t request_count = 0;
    std::size_t accepted_count = 0;
    std::vector<PmRecord> pms;
    std::vector<HostingSegment> segments;
    std::vector<Rejection> rejected;
    std::size_t migration_count = 0;
    double makespan_time = 0;  // last departure
    double horizon = 0;        // end of the observation window
    std::vector<EventRecord> event_log;
};

/// Runs one repetition with the given seed (defaults to scenario.seed).
/// Events at equal times are handled departures first, then arrivals, then
/// the migration tick; each class in ascending request_id. Arrivals that
/// no host can take are rejected, never queued.
SimulationResult run_simulation(const Scenario& scenario, std::optional<std::uint64_t> seed = std::nullopt);

/// Same as above with an explicit request list.
SimulationResult run_simulation(const Scenario& scenario, const std::vector<VmRequest>& requests, std::uint64_t seed);

/// Applies every proposal of the shared consolidation proposer whose move is
/// still feasible and strictly lowers the projected power of the datacenter
/// at the current clock. Returns the number of moves applied.
template <typename Demand>
std::size_t migration_step(DataCenterState& state, const PowerScheme& scheme, Demand&& demand_on,
                           std::vector<EventRecord>* log = nullptr);

/// CSV text of an event log.
std::string write_event_log(const std::vector<EventRecord>& log);

struct CapacityViolation {
    std::size_t pm = 0;
    std::size_t slot = 0;
    int dimension = 0;
    double usage = 0;
};

/// Exhaustive scan of every slot x host x dimension of the recorded
/// histories for slot-average usage above 1 + capacity_tolerance, plus every
/// recorded instantaneous usage point.
std::vector<CapacityViolation> capacity_violations(const SimulationResult& result);

}  // namespace dcsim

#include "dcsim/engine_impl.hpp"
