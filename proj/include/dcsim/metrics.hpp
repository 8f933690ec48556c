#pragma once

// Load-balance, energy, cost and confidence metrics over utilization
// snapshots. Snapshot functions are templated on the scalar type and take
// Eigen arrays, so they accept expressions as well as stored data.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dcsim {

template <typename Scalar>
using ServerMatrix = Eigen::Array<Scalar, Eigen::Dynamic, 3>;

template <typename Scalar>
using ResourceRow = Eigen::Array<Scalar, 1, 3>;

/// Per-server (cpu, mem, net) utilization for one observation window, with
/// per-server weights used by the datacenter averages: CPU core counts for
/// the cpu column and resource capacities for mem/net.
template <typename Scalar = double>
struct UtilizationSnapshot {
    ServerMatrix<Scalar> utilization;
    ServerMatrix<Scalar> weights;

    Eigen::Index size() const { return utilization.rows(); }

    /// mem/net weights default to 1 (plain mean).
    static UtilizationSnapshot with_cores(ServerMatrix<Scalar> util, const Eigen::Array<Scalar, Eigen::Dynamic, 1>& cores)
    {
        UtilizationSnapshot s{std::move(util), ServerMatrix<Scalar>::Ones(cores.rows(), 3)};
        s.weights.col(0) = cores;
        return s;
    }

    /// Equal weights everywhere.
    static UtilizationSnapshot unweighted(ServerMatrix<Scalar> util)
    {
        const auto n = util.rows();
        return UtilizationSnapshot{std::move(util), ServerMatrix<Scalar>::Ones(n, 3)};
    }
};

/// Throws std::invalid_argument on shape mismatch, components outside
/// [0, 1] or CPU weights below 1.
template <typename Scalar>
void validate(const UtilizationSnapshot<Scalar>& s)
{
    if (s.utilization.rows() != s.weights.rows()) throw std::invalid_argument("snapshot: weights shape mismatch");
    if (s.size() > 0) {
        if ((s.utilization < Scalar(0)).any() || (s.utilization > Scalar(1)).any())
            throw std::invalid_argument("snapshot: utilization outside [0, 1]");
        if ((s.weights.col(0) < Scalar(1)).any()) throw std::invalid_argument("snapshot: core counts must be >= 1");
        if ((s.weights <= Scalar(0)).any()) throw std::invalid_argument("snapshot: weights must be positive");
    }
}

enum class ImbalanceVariant {
    per_server,  // spread of a server's own (cpu, mem, net) around Avg_i
    literal,     // Avg_i against the datacenter-wide averages
};

/// Weighted datacenter averages (CPU_u^A, MEM_u^A, NET_u^A).
template <typename Scalar>
ResourceRow<Scalar> avg_utilization(const UtilizationSnapshot<Scalar>& s)
{
    if (s.size() == 0) throw std::invalid_argument("avg_utilization: empty snapshot");
    // offsets from the first row, so equal utilizations average to exactly that value
    const ResourceRow<Scalar> ref = s.utilization.row(0);
    return ref + ((s.utilization.rowwise() - ref) * s.weights).colwise().sum() / s.weights.colwise().sum();
}

/// Avg_i for every server.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> integrated_utilization(const UtilizationSnapshot<Scalar>& s)
{
    const auto first = s.utilization.col(0);
    return first + ((s.utilization.col(1) - first) + (s.utilization.col(2) - first)) / Scalar(3);
}

/// ILB_i for every server.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> server_imbalances(const UtilizationSnapshot<Scalar>& s, ImbalanceVariant variant)
{
    const auto avg_i = integrated_utilization(s);
    if (variant == ImbalanceVariant::per_server)
        return (s.utilization.colwise() - avg_i).square().rowwise().mean();

    const ResourceRow<Scalar> dc = avg_utilization(s);
    Eigen::Array<Scalar, Eigen::Dynamic, 1> out(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) out(i) = (dc - avg_i(i)).square().mean();
    return out;
}

template <typename Scalar>
Scalar server_imbalance(const UtilizationSnapshot<Scalar>& s, Eigen::Index i, ImbalanceVariant variant)
{
    if (i < 0 || i >= s.size()) throw std::out_of_range("server_imbalance: index out of range");
    return server_imbalances(s, variant)(i);
}

/// (IBL_cpu, IBL_mem, IBL_net): summed squared deviation from the weighted
/// datacenter average, not divided by N.
template <typename Scalar>
ResourceRow<Scalar> resource_imbalance(const UtilizationSnapshot<Scalar>& s)
{
    const ResourceRow<Scalar> dc = avg_utilization(s);
    return (s.utilization.rowwise() - dc).square().colwise().sum();
}

template <typename Scalar>
Scalar total_imbalance(const UtilizationSnapshot<Scalar>& s, ImbalanceVariant variant)
{
    return server_imbalances(s, variant).sum();
}

template <typename Scalar>
Scalar avg_imbalance_pm(const UtilizationSnapshot<Scalar>& s, ImbalanceVariant variant)
{
    if (s.size() == 0) throw std::invalid_argument("avg_imbalance_pm: empty snapshot");
    return total_imbalance(s, variant) / Scalar(s.size());
}

template <typename Scalar>
Scalar avg_imbalance_cdc(const UtilizationSnapshot<Scalar>& s)
{
    if (s.size() == 0) throw std::invalid_argument("avg_imbalance_cdc: empty snapshot");
    return resource_imbalance(s).sum() / Scalar(s.size());
}

/// (max load, min load / max load); efficiency is 1 when every load is 0.
template <typename Derived>
std::pair<typename Derived::Scalar, typename Derived::Scalar> makespan_and_efficiency(const Eigen::ArrayBase<Derived>& loads)
{
    using Scalar = typename Derived::Scalar;
    if (loads.size() == 0) throw std::invalid_argument("makespan_and_efficiency: no loads");
    if ((loads < Scalar(0)).any()) throw std::invalid_argument("makespan_and_efficiency: negative load");
    const Scalar hi = loads.maxCoeff();
    const Scalar lo = loads.minCoeff();
    return {hi, hi == Scalar(0) ? Scalar(1) : lo / hi};
}

/// Blade-server polynomial; inputs are taken in whatever units the caller
/// uses.
template <typename Scalar>
Scalar blade_power(Scalar u_cpu, Scalar u_mem, Scalar u_disk, Scalar u_net)
{
    return Scalar(14.5) + Scalar(0.2) * u_cpu + Scalar(4.5e-8) * u_mem + Scalar(0.003) * u_disk + Scalar(3.1e-8) * u_net;
}

struct PortGroup {
    double count = 0;
    double watts = 0;
};

/// Chassis + line cards + transceivers, each group as count x power.
double switch_power(double p_chassis, double linecards, double p_linecard, std::span<const PortGroup> ports);

/// Piecewise-constant series: values[k] holds on [times[k], times[k+1]),
/// the last value holds indefinitely.
template <typename Value>
struct StepSeries {
    std::vector<double> times;
    std::vector<Value> values;

    static StepSeries slotted(std::vector<Value> per_slot, double slot_length, double origin = 0.0)
    {
        StepSeries s;
        s.times.reserve(per_slot.size());
        for (std::size_t k = 0; k < per_slot.size(); ++k) s.times.push_back(origin + static_cast<double>(k) * slot_length);
        s.values = std::move(per_slot);
        return s;
    }
};

/// Energy over [t0, t1): sum of power(value) x overlap per piece.
template <typename Value, typename PowerFn>
double pm_energy(PowerFn&& power, const StepSeries<Value>& series, double t0, double t1)
{
    if (series.times.size() != series.values.size()) throw std::invalid_argument("pm_energy: malformed series");
    if (!(t1 >= t0)) throw std::invalid_argument("pm_energy: t1 < t0");
    if (t1 == t0) return 0.0;
    if (series.times.empty() || series.times.front() > t0) throw std::invalid_argument("pm_energy: series does not cover t0");

    double energy = 0;
    const std::size_t n = series.times.size();
    auto first = std::upper_bound(series.times.begin(), series.times.end(), t0);
    for (std::size_t k = static_cast<std::size_t>(first - series.times.begin()) - 1; k < n && series.times[k] < t1; ++k) {
        const double a = std::max(t0, series.times[k]);
        const double b = k + 1 < n ? std::min(t1, series.times[k + 1]) : t1;
        if (b > a) energy += power(series.values[k]) * (b - a);
    }
    return energy;
}

template <typename Range>
double cdc_energy(const Range& per_pm)
{
    double total = 0;
    for (double e : per_pm) total += e;
    return total;
}

/// Cost per task for a priced infrastructure:
/// (c_h t_exe I)/(i n_c^2) * floor((t_exe I)/(i n_vm n_c)).
/// Every input must be positive.
double cp_metric(double price_per_hour, double t_exe, double tracing_interval, double task_interval, double n_vm, double n_cores);

struct ConfidenceInterval {
    double mean = 0;
    double stddev = 0;  // n-1 denominator
    double lower = 0;
    double upper = 0;
};

/// Mean, sample standard deviation and the normal-approximation 95%
/// interval mean -/+ 1.96 s / sqrt(n). Needs n >= 2.
ConfidenceInterval confidence_interval(std::span<const double> samples);

}  // namespace dcsim
