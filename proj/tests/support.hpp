#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "dcsim/engine.hpp"

namespace dcsim::testing {

inline VmRequest scalar_request(std::int64_t id, double start, double end, double capacity)
{
    return VmRequest{id, 1, start, end, capacity};
}

/// Homogeneous fleet of one PM type running a fixed request list.
inline Scenario trace_scenario(std::vector<VmRequest> requests, int pms, const std::string& policy = "firstfit",
                               PowerSchemeKind power = PowerSchemeKind::linear, int pm_type = 1)
{
    Scenario s;
    s.pm_fleet = {{pm_type, pms}};
    s.workload = std::move(requests);
    s.policy.name = policy;
    s.power.kind = power;
    return s;
}

inline std::vector<std::int64_t> hosted_ids(const SimulationResult& r, std::size_t pm)
{
    std::vector<std::int64_t> ids;
    for (const auto& seg : r.segments)
        if (seg.pm == pm) ids.push_back(seg.request_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

/// Independent capacity oracle: sweeps the hosting segments of each host and
/// returns the largest summed demand seen in any dimension.
inline double peak_segment_usage(const SimulationResult& r)
{
    std::map<std::size_t, std::vector<std::pair<double, Resources>>> deltas;
    for (const auto& seg : r.segments) {
        if (!(seg.end > seg.begin)) continue;
        deltas[seg.pm].push_back({seg.begin, seg.demand});
        deltas[seg.pm].push_back({seg.end, -seg.demand});
    }
    double peak = 0;
    for (auto& [pm, d] : deltas) {
        // releases before additions at equal times: intervals are half-open
        std::stable_sort(d.begin(), d.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return a.second.sum() < b.second.sum();
        });
        Resources level = Resources::Zero();
        for (const auto& [t, delta] : d) {
            level += delta;
            peak = std::max(peak, level.maxCoeff());
        }
    }
    return peak;
}

}  // namespace dcsim::testing
