#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dcsim/catalog.hpp"
#include "dcsim/workload.hpp"

namespace dcsim {

/// Slack allowed when comparing summed demand against unit capacity, so an
/// exact fit is never rejected by rounding.
inline constexpr double capacity_tolerance = 1e-9;

struct Allocation {
    std::int64_t request_id = 0;
    std::size_t pm = 0;  // fleet index; pm_id = pm + 1
    double start = 0;    // on this host (later than the request start after a migration)
    double end = 0;
    Resources demand = Resources::Zero();  // fractions of the host capacity
};

/// Usage and power state from `time` until the next point.
struct UsagePoint {
    double time = 0;
    Resources usage = Resources::Zero();
    bool on = true;

    friend bool operator==(const UsagePoint& a, const UsagePoint& b)
    {
        return a.time == b.time && (a.usage == b.usage).all() && a.on == b.on;
    }
};

using UsageHistory = std::vector<UsagePoint>;

struct Interval {
    double begin = 0;
    double end = 0;
    double length() const { return end - begin; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

class PmInstance {
public:
    PmInstance(std::size_t index, const PmType& type, bool on);

    std::size_t index() const { return index_; }
    int pm_id() const { return static_cast<int>(index_) + 1; }
    const PmType& type() const { return type_; }
    bool on() const { return on_; }
    bool ever_used() const { return ever_used_; }
    const std::vector<Allocation>& allocations() const { return allocations_; }
    /// Summed demand of the allocations hosted right now.
    const Resources& usage() const { return usage_; }
    const UsageHistory& history() const { return history_; }

    /// Per-dimension maximum of summed demand over [t0, t1), counting every
    /// hosted allocation whose interval overlaps the window.
    Resources peak_usage(double t0, double t1) const;

private:
    friend class DataCenterState;

    void record(double time);
    void recompute_usage();

    std::size_t index_;
    PmType type_;
    bool on_;
    bool ever_used_ = false;
    double latest_start_ = 0;
    double min_end_ = std::numeric_limits<double>::infinity();
    std::vector<Allocation> allocations_;
    Resources usage_ = Resources::Zero();
    UsageHistory history_;
};

/// A closed stretch of one request on one host.
struct HostingSegment {
    std::int64_t request_id = 0;
    std::size_t pm = 0;
    double begin = 0;
    double end = 0;
    Resources demand = Resources::Zero();
};

/// Mutable datacenter during one run. Operations happen at a monotone clock
/// `now()`; history points are recorded at the clock time of each change.
/// With `sleep_allowed`, hosts start asleep, wake on their first allocation
/// and sleep again the instant they become empty; otherwise they stay on.
class DataCenterState {
public:
    DataCenterState(const std::vector<PmType>& fleet, bool sleep_allowed);

    std::size_t size() const { return pms_.size(); }
    const PmInstance& pm(std::size_t i) const { return pms_.at(i); }
    const std::vector<PmInstance>& pms() const { return pms_; }
    double now() const { return now_; }
    bool sleep_allowed() const { return sleep_allowed_; }
    std::size_t active_count() const { return host_of_.size(); }

    /// Throws std::invalid_argument when moving backwards.
    void advance_to(double t);

    /// True iff hosting `demand` over [t0, t1) keeps every dimension of `pm`
    /// at or below 1 (+ capacity_tolerance) throughout the window.
    bool can_host(std::size_t pm, const Resources& demand, double t0, double t1) const;

    /// Places `request` on `pm` from max(now, start) to its end. Advances the
    /// clock to the request start if that lies ahead. Throws ValidationError
    /// on a capacity violation, a start in the past, or a duplicate id.
    void allocate(const VmRequest& request, std::size_t pm, const Resources& demand);
    /// Removes the request at the current clock. Throws ValidationError if unknown.
    void release(std::int64_t request_id);
    /// Moves a hosted request to `to` at the current clock with its demand
    /// re-expressed for the new host.
    void migrate(std::int64_t request_id, std::size_t to, const Resources& demand_on_target);

    std::optional<std::size_t> host_of(std::int64_t request_id) const;
    const Allocation& allocation_of(std::int64_t request_id) const;

    const std::vector<HostingSegment>& segments() const { return segments_; }

    /// Closes the state at `horizon`: returns each host's on-intervals
    /// clipped to [0, horizon).
    std::vector<std::vector<Interval>> power_on_intervals(double horizon) const;

private:
    Allocation remove(std::int64_t request_id);

    std::vector<PmInstance> pms_;
    bool sleep_allowed_;
    double now_ = 0;
    std::unordered_map<std::int64_t, std::size_t> host_of_;
    std::vector<HostingSegment> segments_;
};

/// Time-weighted mean of usage over [t0, t1). t1 > t0.
Resources time_average(const UsageHistory& history, double t0, double t1);

/// Per-slot time-weighted usage over [0, t_end); the last slot is pro-rated
/// over its covered part.
std::vector<Resources> slot_averages(const UsageHistory& history, double slot_length, double t_end);

/// On-intervals of a history, merged, clipped to [0, horizon).
std::vector<Interval> on_intervals(const UsageHistory& history, double horizon);

}  // namespace dcsim
