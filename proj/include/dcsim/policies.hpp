#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcsim/rng.hpp"
#include "dcsim/state.hpp"

namespace dcsim {

/// What a host selector sees at one arrival. The state is read-only; the
/// request demand depends on the host type, so it is given per fleet index.
struct PolicyContext {
    const DataCenterState& state;
    const VmRequest& request;
    std::span<const Resources> demand_by_pm;
    Rng& rng;
    double slot_length = 1.0;

    double now() const { return state.now(); }
    bool feasible(std::size_t pm) const
    {
        return state.can_host(pm, demand_by_pm[pm], state.now(), request.end_time);
    }
};

enum class UtilizationMeasure { integrated, cpu };

/// Integrated utilization Avg_i = mean of the (cpu, mem, bw) fractions, or
/// the CPU fraction alone.
double current_utilization(const PmInstance& pm, UtilizationMeasure measure);

/// Selects a host index for an arriving request, or nullopt to reject.
class PlacementPolicy {
public:
    virtual ~PlacementPolicy() = default;
    virtual std::optional<std::size_t> select_host(const PolicyContext& ctx) = 0;
};

/// Persistent cursor; scans one full cycle starting at the cursor and
/// leaves the cursor just past the chosen host.
class RoundRobinPolicy final : public PlacementPolicy {
public:
    std::optional<std::size_t> select_host(const PolicyContext& ctx) override;
    std::size_t cursor() const { return cursor_; }
    void set_cursor(std::size_t c) { cursor_ = c; }

private:
    std::size_t cursor_ = 0;
};

/// Uniform over the feasible hosts.
class RandomPolicy final : public PlacementPolicy {
public:
    std::optional<std::size_t> select_host(const PolicyContext& ctx) override;
};

class FirstFitPolicy final : public PlacementPolicy {
public:
    std::optional<std::size_t> select_host(const PolicyContext& ctx) override;
};

/// LIF / MU: feasible host with the lowest current utilization, ties to
/// the lowest index.
class LowestUtilizationPolicy final : public PlacementPolicy {
public:
    explicit LowestUtilizationPolicy(UtilizationMeasure measure = UtilizationMeasure::integrated) : measure_(measure) {}
    std::optional<std::size_t> select_host(const PolicyContext& ctx) override;

private:
    UtilizationMeasure measure_;
};

/// MC: feasible host whose recent CPU history correlates best (Pearson)
/// with the datacenter-mean CPU history over the last `window` complete
/// slots. Hosts with zero-variance history rank last; if fewer than two
/// slots are complete every host ranks last and the lowest feasible index
/// wins.
class MaxCorrelationPolicy final : public PlacementPolicy {
public:
    explicit MaxCorrelationPolicy(std::size_t window = 12) : window_(window) {}
    std::optional<std::size_t> select_host(const PolicyContext& ctx) override;

private:
    void refresh(const PolicyContext& ctx, std::size_t complete_slots);

    std::size_t window_;
    std::size_t cached_slots_ = 0;
    bool cache_valid_ = false;
    std::vector<std::optional<double>> correlation_;
};

struct PolicySpec {
    std::string name = "lif";  // roundrobin | random | rs | firstfit | lif | mu | mc
    UtilizationMeasure measure = UtilizationMeasure::integrated;
    std::size_t mc_window = 12;
};

/// Throws ValidationError for unknown names.
std::unique_ptr<PlacementPolicy> make_policy(const PolicySpec& spec);
std::vector<std::string> policy_names();

/// Pearson correlation; nullopt when either series has zero variance or
/// fewer than two points.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct MigrationProposal {
    std::int64_t request_id = 0;
    std::size_t from = 0;
    std::size_t to = 0;
};

/// A candidate move as seen against the projected state of the pass.
struct MoveView {
    MigrationProposal move;
    Resources from_before, to_before;
    Resources from_after, to_after;
    std::size_t from_count_after = 0;  // allocations left on the source
    std::size_t to_count_before = 0;
};

/// Greedy consolidation: sources are the busy hosts in ascending CPU
/// utilization; each VM on a source is proposed to the most-utilized
/// feasible host that is at least as utilized as the source and has not
/// itself been a source. `accept(view)` vets each candidate; only accepted
/// moves enter the projection, so every later candidate is judged against
/// the state the accepted moves produce. Returns the accepted moves in order.
template <typename Demand, typename Accept>
std::vector<MoveView> propose_migrations(const DataCenterState& state, Demand&& demand_on, Accept&& accept);

/// Same, accepting every candidate.
template <typename Demand>
std::vector<MigrationProposal> propose_migrations(const DataCenterState& state, Demand&& demand_on);

}  // namespace dcsim

#include "dcsim/policies_impl.hpp"
