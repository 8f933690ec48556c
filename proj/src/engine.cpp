#include "dcsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <unordered_map>

#include "dcsim/text.hpp"

namespace dcsim {

void validate_scenario(const Scenario& s)
{
    if (auto v = validate_catalog(s.catalog); !v.empty()) throw ValidationError(v.front().message);
    if (!(s.slot_length > 0)) throw ValidationError("slot_length must be positive");
    if (s.repetitions < 1) throw ValidationError("repetitions must be >= 1");
    if (s.migration_interval && !(*s.migration_interval > 0)) throw ValidationError("migration_interval must be positive");
    if (s.horizon && !(*s.horizon >= 0)) throw ValidationError("horizon must be >= 0");
    for (const auto& [type_id, count] : s.pm_fleet) {
        s.catalog.pm(type_id);
        if (count < 0) throw ValidationError("fleet count for PM type " + std::to_string(type_id) + " is negative");
    }
    validate_power_scheme(s.power);
    make_policy(s.policy);
    if (const auto* spec = std::get_if<WorkloadSpec>(&s.workload)) validate_workload_spec(*spec, s.catalog);
}

std::vector<PmType> expand_fleet(const Scenario& s)
{
    std::vector<PmType> fleet;
    for (const auto& [type_id, count] : s.pm_fleet)
        for (int i = 0; i < count; ++i) fleet.push_back(s.catalog.pm(type_id));
    return fleet;
}

std::vector<VmRequest> materialize_workload(const Scenario& s, std::uint64_t seed)
{
    if (const auto* spec = std::get_if<WorkloadSpec>(&s.workload)) {
        WorkloadSpec seeded = *spec;
        seeded.seed = seed;
        return generate_workload(seeded, s.catalog);
    }
    return std::get<std::vector<VmRequest>>(s.workload);
}

Resources request_demand(const VmRequest& r, const Catalog& catalog, const PmType& host)
{
    if (r.capacity) return Resources::Constant(*r.capacity);
    return demand_fraction(catalog.vm(r.vm_type_id), host);
}

SimulationResult run_simulation(const Scenario& scenario, std::optional<std::uint64_t> seed)
{
    const std::uint64_t s = seed.value_or(scenario.seed);
    return run_simulation(scenario, materialize_workload(scenario, s), s);
}

namespace {

struct Departure {
    double time;
    std::int64_t request_id;
    bool operator>(const Departure& o) const
    {
        return time != o.time ? time > o.time : request_id > o.request_id;
    }
};

}  // namespace

SimulationResult run_simulation(const Scenario& scenario, const std::vector<VmRequest>& requests, std::uint64_t seed)
{
    validate_scenario(scenario);
    const Catalog& catalog = scenario.catalog;
    const std::vector<PmType> fleet = expand_fleet(scenario);

    std::unordered_map<std::int64_t, const VmRequest*> by_id;
    by_id.reserve(requests.size());
    for (const auto& r : requests) {
        check_request(r);
        catalog.vm(r.vm_type_id);
        if (!by_id.emplace(r.request_id, &r).second)
            throw ValidationError("duplicate request_id " + std::to_string(r.request_id));
    }

    // Demands per distinct host type; the fleet has few types.
    std::vector<std::size_t> type_slot(fleet.size());
    std::vector<PmType> distinct;
    for (std::size_t i = 0; i < fleet.size(); ++i) {
        auto it = std::find(distinct.begin(), distinct.end(), fleet[i]);
        type_slot[i] = static_cast<std::size_t>(it - distinct.begin());
        if (it == distinct.end()) distinct.push_back(fleet[i]);
    }
    auto demand_on = [&](std::int64_t request_id, std::size_t pm) {
        return request_demand(*by_id.at(request_id), catalog, fleet[pm]);
    };

    std::vector<const VmRequest*> arrivals;
    arrivals.reserve(requests.size());
    for (const auto& r : requests) arrivals.push_back(&r);
    std::stable_sort(arrivals.begin(), arrivals.end(), [](const VmRequest* a, const VmRequest* b) {
        return a->start_time != b->start_time ? a->start_time < b->start_time : a->request_id < b->request_id;
    });

    SimulationResult result;
    result.seed = seed;
    result.policy = scenario.policy.name;
    result.power = scenario.power;
    result.slot_length = scenario.slot_length;
    result.workload_hash = fnv1a64(write_trace(requests));
    result.request_count = requests.size();

    DataCenterState state(fleet, scenario.power.allows_sleep());
    auto policy = make_policy(scenario.policy);
    Rng policy_rng = Rng(seed).split(2);
    std::vector<EventRecord>* log = scenario.record_events ? &result.event_log : nullptr;

    std::priority_queue<Departure, std::vector<Departure>, std::greater<>> departures;
    std::vector<Resources> demand_by_type(distinct.size());
    std::vector<Resources> demand_by_pm(fleet.size());
    std::size_t next_arrival = 0;
    std::uint64_t tick_index = 1;

    while (true) {
        const bool have_dep = !departures.empty();
        const bool have_arr = next_arrival < arrivals.size();
        if (!have_dep && !have_arr) break;

        const double t_dep = have_dep ? departures.top().time : INFINITY;
        const double t_arr = have_arr ? arrivals[next_arrival]->start_time : INFINITY;
        const double t_tick =
            scenario.migration_interval ? static_cast<double>(tick_index) * *scenario.migration_interval : INFINITY;

        if (have_dep && t_dep <= t_arr && t_dep <= t_tick) {
            const Departure d = departures.top();
            departures.pop();
            state.advance_to(d.time);
            const int pm_id = static_cast<int>(*state.host_of(d.request_id)) + 1;
            state.release(d.request_id);
            result.makespan_time = std::max(result.makespan_time, d.time);
            if (log) log->push_back(EventRecord{d.time, "depart", d.request_id, pm_id, ""});
        } else if (have_arr && t_arr <= t_tick) {
            const VmRequest& r = *arrivals[next_arrival++];
            state.advance_to(r.start_time);
            for (std::size_t k = 0; k < distinct.size(); ++k) demand_by_type[k] = request_demand(r, catalog, distinct[k]);
            for (std::size_t i = 0; i < fleet.size(); ++i) demand_by_pm[i] = demand_by_type[type_slot[i]];

            const PolicyContext ctx{state, r, demand_by_pm, policy_rng, scenario.slot_length};
            if (const auto host = policy->select_host(ctx)) {
                state.allocate(r, *host, demand_by_pm[*host]);
                departures.push(Departure{r.end_time, r.request_id});
                ++result.accepted_count;
                if (log) log->push_back(EventRecord{r.start_time, "arrive", r.request_id, static_cast<int>(*host) + 1, ""});
            } else {
                result.rejected.push_back(Rejection{r.request_id, "no_feasible_host"});
                if (log) log->push_back(EventRecord{r.start_time, "reject", r.request_id, 0, "no_feasible_host"});
            }
        } else {
            state.advance_to(t_tick);
            ++tick_index;
            if (state.active_count() > 0) result.migration_count += migration_step(state, scenario.power, demand_on, log);
        }
    }

    result.horizon = std::max(scenario.horizon.value_or(0.0), result.makespan_time);
    const auto power_on = state.power_on_intervals(result.horizon);
    result.pms.reserve(fleet.size());
    for (std::size_t i = 0; i < fleet.size(); ++i) {
        const auto& pm = state.pm(i);
        result.pms.push_back(PmRecord{pm.pm_id(), pm.type(), pm.ever_used(), pm.history(), power_on[i]});
    }
    result.segments = state.segments();
    return result;
}

std::string write_event_log(const std::vector<EventRecord>& log)
{
    std::string out = "time,event_kind,request_id,pm_id,detail\n";
    for (const auto& e : log) {
        out += format_double(e.time) + ',' + e.kind + ',' + std::to_string(e.request_id) + ',' +
               std::to_string(e.pm_id) + ',' + e.detail + '\n';
    }
    return out;
}

std::vector<CapacityViolation> capacity_violations(const SimulationResult& result)
{
    std::vector<CapacityViolation> out;
    const double limit = 1.0 + capacity_tolerance;
    for (std::size_t pm = 0; pm < result.pms.size(); ++pm) {
        const auto& history = result.pms[pm].history;
        for (const auto& point : history)
            for (int d = 0; d < 3; ++d)
                if (point.usage(d) > limit) out.push_back({pm, static_cast<std::size_t>(point.time / result.slot_length), d, point.usage(d)});
        const auto slots = slot_averages(history, result.slot_length, result.horizon);
        for (std::size_t k = 0; k < slots.size(); ++k)
            for (int d = 0; d < 3; ++d)
                if (slots[k](d) > limit) out.push_back({pm, k, d, slots[k](d)});
    }
    return out;
}

}  // namespace dcsim
