#include "dcsim/report.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "dcsim/text.hpp"

namespace dcsim {

std::string to_string(ImbalanceVariant v)
{
    return v == ImbalanceVariant::per_server ? "per_server" : "literal";
}

ImbalanceVariant parse_imbalance_variant(const std::string& name)
{
    if (name == "per_server") return ImbalanceVariant::per_server;
    if (name == "literal") return ImbalanceVariant::literal;
    throw ValidationError("unknown imbalance variant '" + name + "'");
}

UtilizationSnapshot<double> run_snapshot(const SimulationResult& result)
{
    const auto n = static_cast<Eigen::Index>(result.pms.size());
    UtilizationSnapshot<double> snap{ServerMatrix<double>::Zero(n, 3), ServerMatrix<double>::Ones(n, 3)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& pm = result.pms[static_cast<std::size_t>(i)];
        snap.weights.row(i) << pm.type.cpu_cores, pm.type.mem_gb, pm.type.bw;
        if (result.horizon > 0)
            snap.utilization.row(i) = time_average(pm.history, 0.0, result.horizon).transpose().min(1.0).max(0.0);
    }
    return snap;
}

MetricReport summarize(const SimulationResult& result, const PowerScheme& scheme, const std::optional<Pricing>& pricing,
                       ImbalanceVariant variant)
{
    MetricReport r;
    r.seed = result.seed;
    r.policy = result.policy;
    r.power_scheme = std::string(to_string(scheme.kind));
    r.variant = variant;
    r.workload_hash = result.workload_hash;
    r.requests = static_cast<double>(result.request_count);
    r.accepted = static_cast<double>(result.accepted_count);
    r.rejected = static_cast<double>(result.rejected.size());
    r.rejection_rate = result.request_count ? r.rejected / r.requests : 0.0;
    r.makespan_time = result.makespan_time;
    r.migrations = static_cast<double>(result.migration_count);
    r.horizon = result.horizon;

    if (!result.pms.empty()) {
        const auto snap = run_snapshot(result);
        const ResourceRow<double> avg = avg_utilization(snap);
        r.cpu_avg = avg(0);
        r.mem_avg = avg(1);
        r.net_avg = avg(2);
        const auto ilb = server_imbalances(snap, variant);
        r.ilb.assign(ilb.data(), ilb.data() + ilb.size());
        const ResourceRow<double> ibl = resource_imbalance(snap);
        r.ibl_cpu = ibl(0);
        r.ibl_mem = ibl(1);
        r.ibl_net = ibl(2);
        r.ibl_tot = ilb.sum();
        r.ibl_avg_pm = avg_imbalance_pm(snap, variant);
        r.ibl_avg_cdc = avg_imbalance_cdc(snap);
        std::tie(r.makespan_load, r.utilization_efficiency) = makespan_and_efficiency(integrated_utilization(snap));
    }

    for (const auto& pm : result.pms) {
        StepSeries<UsagePoint> series;
        for (const auto& p : pm.history) {
            series.times.push_back(p.time);
            series.values.push_back(p);
        }
        auto power = [&](const UsagePoint& p) { return instantaneous_power(scheme, pm.type, std::min(p.usage(0), 1.0), p.on); };
        r.energy_per_pm.push_back(pm_energy(power, series, 0.0, result.horizon));
        if (pm.ever_used) r.pms_used += 1;
        for (const auto& iv : pm.power_on) r.power_on_time += iv.length();
    }
    r.energy_cdc = cdc_energy(r.energy_per_pm);

    if (pricing && result.accepted_count > 0) {
        double hosted = 0;
        for (const auto& s : result.segments) hosted += s.end - s.begin;
        const double t_exe = hosted / static_cast<double>(result.accepted_count);
        r.cp = cp_metric(pricing->price_per_hour, t_exe, pricing->tracing_interval, pricing->task_interval,
                         static_cast<double>(result.accepted_count), pricing->cores_per_vm);
    }
    return r;
}

namespace {

using Getter = std::function<std::optional<double>(const MetricReport&)>;

const std::vector<std::pair<std::string, Getter>>& column_table()
{
    static const std::vector<std::pair<std::string, Getter>> table = {
        {"requests", [](const MetricReport& r) { return r.requests; }},
        {"accepted", [](const MetricReport& r) { return r.accepted; }},
        {"rejected", [](const MetricReport& r) { return r.rejected; }},
        {"rejection_rate", [](const MetricReport& r) { return r.rejection_rate; }},
        {"cpu_avg", [](const MetricReport& r) { return r.cpu_avg; }},
        {"mem_avg", [](const MetricReport& r) { return r.mem_avg; }},
        {"net_avg", [](const MetricReport& r) { return r.net_avg; }},
        {"ibl_cpu", [](const MetricReport& r) { return r.ibl_cpu; }},
        {"ibl_mem", [](const MetricReport& r) { return r.ibl_mem; }},
        {"ibl_net", [](const MetricReport& r) { return r.ibl_net; }},
        {"ibl_tot", [](const MetricReport& r) { return r.ibl_tot; }},
        {"ibl_avg_pm", [](const MetricReport& r) { return r.ibl_avg_pm; }},
        {"ibl_avg_cdc", [](const MetricReport& r) { return r.ibl_avg_cdc; }},
        {"makespan_load", [](const MetricReport& r) { return r.makespan_load; }},
        {"makespan_time", [](const MetricReport& r) { return r.makespan_time; }},
        {"utilization_efficiency", [](const MetricReport& r) { return r.utilization_efficiency; }},
        {"energy_cdc_j", [](const MetricReport& r) { return r.energy_cdc; }},
        {"pms_used", [](const MetricReport& r) { return r.pms_used; }},
        {"power_on_time_s", [](const MetricReport& r) { return r.power_on_time; }},
        {"migrations", [](const MetricReport& r) { return r.migrations; }},
        {"horizon_s", [](const MetricReport& r) { return r.horizon; }},
        {"cp", [](const MetricReport& r) { return r.cp; }},
    };
    return table;
}

std::string cell(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

}  // namespace

const std::vector<std::string>& metric_columns()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, getter] : column_table()) out.push_back(name);
        return out;
    }();
    return names;
}

std::optional<double> metric_value(const MetricReport& r, const std::string& column)
{
    for (const auto& [name, getter] : column_table())
        if (name == column) return getter(r);
    throw std::invalid_argument("unknown metric column '" + column + "'");
}

std::string reports_csv(const std::vector<MetricReport>& reports)
{
    std::string out = "seed,policy,power_scheme,imbalance_variant,workload_hash";
    for (const auto& name : metric_columns()) out += ',' + name;
    out += '\n';
    for (const auto& r : reports) {
        out += std::to_string(r.seed) + ',' + r.policy + ',' + r.power_scheme + ',' + to_string(r.variant) + ',' +
               hex64(r.workload_hash);
        for (const auto& [name, getter] : column_table()) out += ',' + cell(getter(r));
        out += '\n';
    }
    return out;
}

Aggregate aggregate(const std::vector<MetricReport>& reports, std::string label)
{
    Aggregate a;
    a.label = std::move(label);
    a.runs = reports.size();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& r : reports) h = fnv1a64(hex64(r.workload_hash), h);
    a.workload_hash = h;

    for (const auto& [name, getter] : column_table()) {
        std::vector<double> xs;
        for (const auto& r : reports)
            if (auto v = getter(r)) xs.push_back(*v);
        if (xs.empty()) continue;
        AggregateColumn col{name, 0, std::nullopt};
        if (xs.size() >= 2) {
            col.ci = confidence_interval(xs);
            col.mean = col.ci->mean;
        } else {
            col.mean = xs.front();
        }
        a.columns.push_back(col);
    }
    return a;
}

std::string aggregates_csv(const std::vector<Aggregate>& aggregates)
{
    std::string out = "label,runs,workload_hash";
    for (const auto& name : metric_columns()) out += ',' + name + "_mean," + name + "_s," + name + "_ci_lo," + name + "_ci_hi";
    out += '\n';
    for (const auto& a : aggregates) {
        out += a.label + ',' + std::to_string(a.runs) + ',' + hex64(a.workload_hash);
        for (const auto& name : metric_columns()) {
            auto it = std::find_if(a.columns.begin(), a.columns.end(), [&](const AggregateColumn& c) { return c.name == name; });
            if (it == a.columns.end()) {
                out += ",,,,";
                continue;
            }
            out += ',' + format_double(it->mean);
            if (it->ci) out += ',' + format_double(it->ci->stddev) + ',' + format_double(it->ci->lower) + ',' + format_double(it->ci->upper);
            else out += ",,,";
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const MetricReport& r, bool include_wall_time)
{
    nlohmann::json j;
    j["seed"] = r.seed;
    j["policy"] = r.policy;
    j["power_scheme"] = r.power_scheme;
    j["imbalance_variant"] = to_string(r.variant);
    j["workload_hash"] = hex64(r.workload_hash);
    for (const auto& [name, getter] : column_table()) {
        if (auto v = getter(r)) j["metrics"][name] = *v;
        else j["metrics"][name] = nullptr;
    }
    j["ilb_per_pm"] = r.ilb;
    j["energy_per_pm_j"] = r.energy_per_pm;
    if (include_wall_time) j["wall_time_s"] = r.wall_time_s;
    return j;
}

nlohmann::json to_json(const Aggregate& a)
{
    nlohmann::json j;
    j["label"] = a.label;
    j["runs"] = a.runs;
    j["workload_hash"] = hex64(a.workload_hash);
    for (const auto& c : a.columns) {
        nlohmann::json col;
        col["mean"] = c.mean;
        if (c.ci) {
            col["s"] = c.ci->stddev;
            col["ci_lo"] = c.ci->lower;
            col["ci_hi"] = c.ci->upper;
        } else {
            col["s"] = col["ci_lo"] = col["ci_hi"] = nullptr;
        }
        j["metrics"][c.name] = col;
    }
    return j;
}

nlohmann::json to_json(const SimulationResult& r)
{
    nlohmann::json j;
    j["seed"] = r.seed;
    j["policy"] = r.policy;
    j["power_scheme"] = std::string(to_string(r.power.kind));
    j["slot_length"] = r.slot_length;
    j["workload_hash"] = hex64(r.workload_hash);
    j["request_count"] = r.request_count;
    j["accepted_count"] = r.accepted_count;
    j["migration_count"] = r.migration_count;
    j["makespan_time"] = r.makespan_time;
    j["horizon"] = r.horizon;
    j["rejected"] = nlohmann::json::array();
    for (const auto& x : r.rejected) j["rejected"].push_back({{"request_id", x.request_id}, {"reason", x.reason}});
    j["pms"] = nlohmann::json::array();
    for (const auto& pm : r.pms) {
        nlohmann::json p;
        p["pm_id"] = pm.pm_id;
        p["pm_type_id"] = pm.type.type_id;
        p["ever_used"] = pm.ever_used;
        p["history"] = nlohmann::json::array();
        for (const auto& h : pm.history)
            p["history"].push_back({h.time, h.usage(0), h.usage(1), h.usage(2), h.on});
        p["power_on"] = nlohmann::json::array();
        for (const auto& iv : pm.power_on) p["power_on"].push_back({iv.begin, iv.end});
        j["pms"].push_back(std::move(p));
    }
    if (!r.event_log.empty()) {
        j["event_log"] = nlohmann::json::array();
        for (const auto& e : r.event_log)
            j["event_log"].push_back({{"time", e.time}, {"kind", e.kind}, {"request_id", e.request_id}, {"pm_id", e.pm_id}, {"detail", e.detail}});
    }
    return j;
}

}  // namespace dcsim
