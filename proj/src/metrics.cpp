#include "dcsim/metrics.hpp"

#include <cmath>

namespace dcsim {

double switch_power(double p_chassis, double linecards, double p_linecard, std::span<const PortGroup> ports)
{
    double total = p_chassis + linecards * p_linecard;
    for (const auto& g : ports) total += g.count * g.watts;
    return total;
}

double cp_metric(double price_per_hour, double t_exe, double tracing_interval, double task_interval, double n_vm, double n_cores)
{
    if (!(price_per_hour > 0 && t_exe > 0 && tracing_interval > 0 && task_interval > 0 && n_vm > 0 && n_cores > 0))
        throw std::invalid_argument("cp_metric: all inputs must be positive");
    const double scale = (price_per_hour * t_exe * tracing_interval) / (task_interval * n_cores * n_cores);
    return scale * std::floor((t_exe * tracing_interval) / (task_interval * n_vm * n_cores));
}

ConfidenceInterval confidence_interval(std::span<const double> samples)
{
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("confidence_interval: need at least two samples");
    double sum = 0;
    for (double x : samples) sum += x;
    const double mean = sum / static_cast<double>(n);
    double ss = 0;
    for (double x : samples) ss += (mean - x) * (mean - x);
    const double s = std::sqrt(ss / static_cast<double>(n - 1));
    const double half = 1.96 * s / std::sqrt(static_cast<double>(n));
    return {mean, s, mean - half, mean + half};
}

}  // namespace dcsim
