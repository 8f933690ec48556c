#pragma once

#include <algorithm>
#include <numeric>

namespace dcsim {

template <typename Demand, typename Accept>
std::vector<MoveView> propose_migrations(const DataCenterState& state, Demand&& demand_on, Accept&& accept)
{
    const std::size_t n = state.size();
    std::vector<MoveView> out;
    if (n < 2) return out;

    std::vector<Resources> projected(n);
    std::vector<std::size_t> count(n);
    std::vector<bool> was_source(n, false), received(n, false);
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i) {
        projected[i] = state.pm(i).usage();
        count[i] = state.pm(i).allocations().size();
        if (count[i] > 0) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return projected[a](0) < projected[b](0); });

    for (const std::size_t src : order) {
        if (received[src]) continue;
        was_source[src] = true;
        const double src_util = projected[src](0);
        for (const auto& alloc : state.pm(src).allocations()) {
            std::optional<std::size_t> best;
            Resources best_demand;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == src || was_source[j] || projected[j](0) < src_util) continue;
                if (best && projected[j](0) <= projected[*best](0)) continue;
                const Resources d = demand_on(alloc.request_id, j);
                if (!(projected[j] + d <= 1.0 + capacity_tolerance).all()) continue;
                best = j;
                best_demand = d;
            }
            if (!best) continue;
            MoveView view{MigrationProposal{alloc.request_id, src, *best},
                          projected[src],
                          projected[*best],
                          count[src] > 1 ? Resources(projected[src] - alloc.demand) : Resources(Resources::Zero()),
                          projected[*best] + best_demand,
                          count[src] - 1,
                          count[*best]};
            if (!accept(static_cast<const MoveView&>(view))) continue;
            projected[src] = view.from_after;
            projected[*best] = view.to_after;
            --count[src];
            ++count[*best];
            received[*best] = true;
            out.push_back(view);
        }
    }
    return out;
}

template <typename Demand>
std::vector<MigrationProposal> propose_migrations(const DataCenterState& state, Demand&& demand_on)
{
    std::vector<MigrationProposal> out;
    for (const auto& v : propose_migrations(state, demand_on, [](const MoveView&) { return true; }))
        out.push_back(v.move);
    return out;
}

}  // namespace dcsim
