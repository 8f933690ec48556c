#include "dcsim/state.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dcsim/text.hpp"

namespace dcsim {

PmInstance::PmInstance(std::size_t index, const PmType& type, bool on) : index_(index), type_(type), on_(on)
{
    history_.push_back(UsagePoint{0.0, Resources::Zero(), on});
}

void PmInstance::recompute_usage()
{
    usage_ = Resources::Zero();
    latest_start_ = 0;
    min_end_ = std::numeric_limits<double>::infinity();
    for (const auto& a : allocations_) {
        usage_ += a.demand;
        latest_start_ = std::max(latest_start_, a.start);
        min_end_ = std::min(min_end_, a.end);
    }
}

void PmInstance::record(double time)
{
    if (history_.back().time == time) history_.pop_back();
    if (!history_.empty()) {
        const auto& last = history_.back();
        if ((last.usage == usage_).all() && last.on == on_) return;
    }
    history_.push_back(UsagePoint{time, usage_, on_});
}

Resources PmInstance::peak_usage(double t0, double t1) const
{
    if (latest_start_ <= t0 && min_end_ > t0) return usage_;

    Resources peak = Resources::Zero();
    auto usage_at = [&](double p) {
        Resources sum = Resources::Zero();
        for (const auto& a : allocations_)
            if (a.start <= p && p < a.end) sum += a.demand;
        return sum;
    };
    peak = usage_at(t0);
    for (const auto& a : allocations_)
        if (a.start > t0 && a.start < t1) peak = peak.max(usage_at(a.start));
    return peak;
}

DataCenterState::DataCenterState(const std::vector<PmType>& fleet, bool sleep_allowed) : sleep_allowed_(sleep_allowed)
{
    pms_.reserve(fleet.size());
    for (std::size_t i = 0; i < fleet.size(); ++i) pms_.emplace_back(i, fleet[i], !sleep_allowed);
}

void DataCenterState::advance_to(double t)
{
    if (t < now_) throw std::invalid_argument("clock cannot move backwards (" + format_double(t) + " < " + format_double(now_) + ")");
    now_ = t;
}

bool DataCenterState::can_host(std::size_t pm, const Resources& demand, double t0, double t1) const
{
    if (!(t1 > t0)) return false;
    const Resources peak = pms_.at(pm).peak_usage(t0, t1);
    return (peak + demand <= 1.0 + capacity_tolerance).all();
}

void DataCenterState::allocate(const VmRequest& request, std::size_t pm, const Resources& demand)
{
    if (request.start_time > now_) advance_to(request.start_time);
    if (request.end_time <= now_)
        throw ValidationError("request " + std::to_string(request.request_id) + " has already ended at t=" + format_double(now_));
    if (host_of_.count(request.request_id))
        throw ValidationError("request " + std::to_string(request.request_id) + " is already allocated");
    if (!((demand > 0).all() && (demand <= 1.0 + capacity_tolerance).all()))
        throw ValidationError("request " + std::to_string(request.request_id) + ": demand components must be in (0, 1]");
    if (!can_host(pm, demand, now_, request.end_time))
        throw ValidationError("capacity violation placing request " + std::to_string(request.request_id) + " on PM " +
                              std::to_string(pm + 1));

    auto& host = pms_[pm];
    host.allocations_.push_back(Allocation{request.request_id, pm, now_, request.end_time, demand});
    host.recompute_usage();
    host.on_ = true;
    host.ever_used_ = true;
    host.record(now_);
    host_of_.emplace(request.request_id, pm);
}

Allocation DataCenterState::remove(std::int64_t request_id)
{
    const auto it = host_of_.find(request_id);
    if (it == host_of_.end()) throw ValidationError("request " + std::to_string(request_id) + " is not allocated");
    auto& host = pms_[it->second];
    host_of_.erase(it);

    auto pos = std::find_if(host.allocations_.begin(), host.allocations_.end(),
                            [&](const Allocation& a) { return a.request_id == request_id; });
    Allocation removed = *pos;
    host.allocations_.erase(pos);
    host.recompute_usage();
    if (host.allocations_.empty() && sleep_allowed_) host.on_ = false;
    host.record(now_);

    if (now_ > removed.start)
        segments_.push_back(HostingSegment{removed.request_id, removed.pm, removed.start, now_, removed.demand});
    return removed;
}

void DataCenterState::release(std::int64_t request_id)
{
    remove(request_id);
}

void DataCenterState::migrate(std::int64_t request_id, std::size_t to, const Resources& demand_on_target)
{
    const auto from = host_of(request_id);
    if (!from) throw ValidationError("request " + std::to_string(request_id) + " is not allocated");
    if (*from == to) return;
    const double end = allocation_of(request_id).end;
    if (!can_host(to, demand_on_target, now_, end))
        throw ValidationError("capacity violation migrating request " + std::to_string(request_id) + " to PM " +
                              std::to_string(to + 1));
    remove(request_id);
    VmRequest moved;
    moved.request_id = request_id;
    moved.start_time = now_;
    moved.end_time = end;
    allocate(moved, to, demand_on_target);
}

std::optional<std::size_t> DataCenterState::host_of(std::int64_t request_id) const
{
    const auto it = host_of_.find(request_id);
    if (it == host_of_.end()) return std::nullopt;
    return it->second;
}

const Allocation& DataCenterState::allocation_of(std::int64_t request_id) const
{
    const auto host = host_of(request_id);
    if (!host) throw ValidationError("request " + std::to_string(request_id) + " is not allocated");
    for (const auto& a : pms_[*host].allocations_)
        if (a.request_id == request_id) return a;
    throw std::logic_error("allocation index out of sync");
}

std::vector<std::vector<Interval>> DataCenterState::power_on_intervals(double horizon) const
{
    std::vector<std::vector<Interval>> out;
    out.reserve(pms_.size());
    for (const auto& pm : pms_) out.push_back(on_intervals(pm.history(), horizon));
    return out;
}

namespace {

// Integral of usage over [t0, t1).
Resources integrate(const UsageHistory& h, double t0, double t1)
{
    Resources total = Resources::Zero();
    auto it = std::upper_bound(h.begin(), h.end(), t0, [](double t, const UsagePoint& p) { return t < p.time; });
    if (it != h.begin()) --it;
    for (; it != h.end() && it->time < t1; ++it) {
        const double a = std::max(t0, it->time);
        const double b = std::next(it) == h.end() ? t1 : std::min(t1, std::next(it)->time);
        if (b > a) total += it->usage * (b - a);
    }
    return total;
}

}  // namespace

Resources time_average(const UsageHistory& history, double t0, double t1)
{
    if (!(t1 > t0)) throw std::invalid_argument("time_average: empty window");
    return integrate(history, t0, t1) / (t1 - t0);
}

std::vector<Resources> slot_averages(const UsageHistory& history, double slot_length, double t_end)
{
    if (!(slot_length > 0)) throw std::invalid_argument("slot_length must be positive");
    std::vector<Resources> out;
    for (std::size_t k = 0;; ++k) {
        const double a = static_cast<double>(k) * slot_length;
        if (a >= t_end) break;
        const double b = std::min(t_end, static_cast<double>(k + 1) * slot_length);
        out.push_back(time_average(history, a, b));
    }
    return out;
}

std::vector<Interval> on_intervals(const UsageHistory& history, double horizon)
{
    std::vector<Interval> out;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (!history[i].on) continue;
        const double a = history[i].time;
        const double b = i + 1 < history.size() ? history[i + 1].time : horizon;
        const double end = std::min(b, horizon);
        if (end <= a) continue;
        if (!out.empty() && out.back().end == a) out.back().end = end;
        else out.push_back(Interval{a, end});
    }
    return out;
}

}  // namespace dcsim
