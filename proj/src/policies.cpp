#include "dcsim/policies.hpp"

#include <cmath>

#include "dcsim/text.hpp"

namespace dcsim {

double current_utilization(const PmInstance& pm, UtilizationMeasure measure)
{
    return measure == UtilizationMeasure::cpu ? pm.usage()(0) : pm.usage().mean();
}

std::optional<std::size_t> RoundRobinPolicy::select_host(const PolicyContext& ctx)
{
    const std::size_t n = ctx.state.size();
    if (n == 0) return std::nullopt;
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t pm = (cursor_ + step) % n;
        if (ctx.feasible(pm)) {
            cursor_ = (pm + 1) % n;
            return pm;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> RandomPolicy::select_host(const PolicyContext& ctx)
{
    std::vector<std::size_t> feasible;
    for (std::size_t pm = 0; pm < ctx.state.size(); ++pm)
        if (ctx.feasible(pm)) feasible.push_back(pm);
    if (feasible.empty()) return std::nullopt;
    return feasible[ctx.rng.below(feasible.size())];
}

std::optional<std::size_t> FirstFitPolicy::select_host(const PolicyContext& ctx)
{
    for (std::size_t pm = 0; pm < ctx.state.size(); ++pm)
        if (ctx.feasible(pm)) return pm;
    return std::nullopt;
}

std::optional<std::size_t> LowestUtilizationPolicy::select_host(const PolicyContext& ctx)
{
    std::optional<std::size_t> best;
    double best_util = 0;
    for (std::size_t pm = 0; pm < ctx.state.size(); ++pm) {
        const double u = current_utilization(ctx.state.pm(pm), measure_);
        if (best && u >= best_util) continue;
        if (!ctx.feasible(pm)) continue;
        best = pm;
        best_util = u;
    }
    return best;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return std::nullopt;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 1e-18 || syy <= 1e-18) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

void MaxCorrelationPolicy::refresh(const PolicyContext& ctx, std::size_t complete_slots)
{
    const std::size_t n = ctx.state.size();
    correlation_.assign(n, std::nullopt);
    cached_slots_ = complete_slots;
    cache_valid_ = true;
    if (complete_slots < 2 || n == 0) return;

    const std::size_t w = std::min(window_, complete_slots);
    const std::size_t first = complete_slots - w;
    std::vector<std::vector<double>> series(n, std::vector<double>(w));
    std::vector<double> mean(w, 0.0);
    for (std::size_t pm = 0; pm < n; ++pm) {
        for (std::size_t k = 0; k < w; ++k) {
            const double a = static_cast<double>(first + k) * ctx.slot_length;
            const double b = static_cast<double>(first + k + 1) * ctx.slot_length;
            series[pm][k] = time_average(ctx.state.pm(pm).history(), a, b)(0);
            mean[k] += series[pm][k] / static_cast<double>(n);
        }
    }
    for (std::size_t pm = 0; pm < n; ++pm) correlation_[pm] = pearson(series[pm], mean);
}

std::optional<std::size_t> MaxCorrelationPolicy::select_host(const PolicyContext& ctx)
{
    const auto complete = static_cast<std::size_t>(std::floor(ctx.now() / ctx.slot_length));
    if (!cache_valid_ || complete != cached_slots_ || correlation_.size() != ctx.state.size()) refresh(ctx, complete);

    std::optional<std::size_t> best, fallback;
    for (std::size_t pm = 0; pm < ctx.state.size(); ++pm) {
        if (!ctx.feasible(pm)) continue;
        if (!fallback) fallback = pm;
        const auto& r = correlation_[pm];
        if (r && (!best || *r > *correlation_[*best])) best = pm;
    }
    return best ? best : fallback;
}

std::unique_ptr<PlacementPolicy> make_policy(const PolicySpec& spec)
{
    if (spec.name == "roundrobin") return std::make_unique<RoundRobinPolicy>();
    if (spec.name == "random" || spec.name == "rs") return std::make_unique<RandomPolicy>();
    if (spec.name == "firstfit") return std::make_unique<FirstFitPolicy>();
    if (spec.name == "lif" || spec.name == "mu") return std::make_unique<LowestUtilizationPolicy>(spec.measure);
    if (spec.name == "mc") {
        if (spec.mc_window < 2) throw ValidationError("policy.mc_window must be >= 2");
        return std::make_unique<MaxCorrelationPolicy>(spec.mc_window);
    }
    throw ValidationError("unknown policy '" + spec.name + "'");
}

std::vector<std::string> policy_names()
{
    return {"roundrobin", "random", "firstfit", "lif", "mu", "mc", "rs"};
}

}  // namespace dcsim
