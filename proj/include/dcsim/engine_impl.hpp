#pragma once

#include "dcsim/text.hpp"

namespace dcsim {

template <typename Demand>
std::size_t migration_step(DataCenterState& state, const PowerScheme& scheme, Demand&& demand_on,
                           std::vector<EventRecord>* log)
{
    struct Projected {
        bool from_on_after, to_on_before;
        double before, after;
    };
    auto evaluate = [&](const MoveView& v) {
        const PmType& from = state.pm(v.move.from).type();
        const PmType& to = state.pm(v.move.to).type();
        const bool from_on_after = v.from_count_after > 0 || !state.sleep_allowed();
        const bool to_on_before = v.to_count_before > 0 || !state.sleep_allowed();
        const double before = instantaneous_power(scheme, from, std::min(v.from_before(0), 1.0), true) +
                              instantaneous_power(scheme, to, std::min(v.to_before(0), 1.0), to_on_before);
        const double after = instantaneous_power(scheme, from, std::clamp(v.from_after(0), 0.0, 1.0), from_on_after) +
                             instantaneous_power(scheme, to, std::min(v.to_after(0), 1.0), true);
        return Projected{from_on_after, to_on_before, before, after};
    };

    const auto moves = propose_migrations(state, demand_on, [&](const MoveView& v) {
        const Projected p = evaluate(v);
        return p.after < p.before - 1e-9;
    });

    std::size_t applied = 0;
    for (const auto& v : moves) {
        const Allocation& alloc = state.allocation_of(v.move.request_id);
        const Resources target_demand = v.to_after - v.to_before;
        if (!state.can_host(v.move.to, target_demand, state.now(), alloc.end)) continue;
        const Projected p = evaluate(v);
        if (log) {
            log->push_back(EventRecord{
                state.now(), "migrate", v.move.request_id, state.pm(v.move.to).pm_id(),
                "from=" + std::to_string(state.pm(v.move.from).pm_id()) + ";from_u=" + format_double(v.from_before(0)) +
                    ";to_u=" + format_double(v.to_before(0)) + ";from_u_after=" + format_double(std::max(v.from_after(0), 0.0)) +
                    ";to_u_after=" + format_double(v.to_after(0)) + ";from_on_after=" + (p.from_on_after ? "1" : "0") +
                    ";to_on_before=" + (p.to_on_before ? "1" : "0") + ";p_before=" + format_double(p.before) +
                    ";p_after=" + format_double(p.after)});
        }
        state.migrate(v.move.request_id, v.move.to, demand_on(v.move.request_id, v.move.to));
        ++applied;
    }
    return applied;
}

}  // namespace dcsim
