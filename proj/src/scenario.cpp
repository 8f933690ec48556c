#include "dcsim/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>

#include "dcsim/keyvalue.hpp"
#include "dcsim/text.hpp"

namespace dcsim {

const std::vector<SchemaKey>& scenario_schema()
{
    static const std::vector<SchemaKey> schema = {
        {"fleet", "catalog", "builtin", "'builtin' (EC2 types) or path to a catalog file"},
        {"fleet", "pms", "", "PM type counts, e.g. 1:34,2:33,3:33 (pm_ids assigned in this order)"},
        {"workload", "trace", "", "path to a trace CSV; when set, generation keys are ignored"},
        {"workload", "count", "1000", "number of generated requests"},
        {"workload", "arrival_rate", "1", "Poisson arrival rate, requests per second"},
        {"workload", "mean_duration", "100", "mean of the exponential request length, seconds"},
        {"workload", "max_duration", "1000", "lengths are truncated at this value, seconds"},
        {"workload", "type_mix", "uniform", "'uniform' or vm_type_id:probability list summing to 1"},
        {"workload", "mode", "vector", "'vector' (VM type resource vectors) or 'scalar' (capacity fractions)"},
        {"workload", "capacity_min", "0", "scalar mode: capacity drawn uniformly from (capacity_min, capacity_max]"},
        {"workload", "capacity_max", "0.5", "scalar mode: upper capacity bound, <= 1"},
        {"policy", "name", "lif", "roundrobin | random | rs | firstfit | lif | mu | mc"},
        {"policy", "utilization", "integrated", "lif/mu measure: 'integrated' (mean of cpu, mem, bw) or 'cpu'"},
        {"policy", "mc_window", "12", "mc: history window in slots"},
        {"policy", "migration_interval", "none", "seconds between consolidation passes, or 'none'"},
        {"power", "scheme", "linear", "npa | linear | dvfs | dns_dvfs"},
        {"power", "k", "0.7", "linear: idle fraction of p_max"},
        {"power", "p_fixed", "", "dvfs: frequency-independent watts (default: host p_min)"},
        {"power", "p_f", "", "dvfs: frequency-dependent watts (default: host p_max - p_min)"},
        {"power", "f_min", "0.1", "dvfs: lowest normalized frequency"},
        {"power", "sleep_power", "0", "watts drawn by a sleeping host"},
        {"run", "slot_length", "1", "sampling slot, seconds"},
        {"run", "repetitions", "1", "independent runs with seeds seed, seed+1, ..."},
        {"run", "seed", "1", "base seed"},
        {"run", "horizon", "", "observation window end, seconds (default: last departure)"},
        {"run", "imbalance_variant", "per_server", "per_server | literal"},
        {"run", "price_per_hour", "", "cost metric: machine price per hour (enables cp)"},
        {"run", "tracing_interval", "1", "cost metric: whole tracing interval"},
        {"run", "task_interval", "1", "cost metric: tracing interval per task"},
        {"run", "cores_per_vm", "1", "cost metric: cores per VM"},
    };
    return schema;
}

std::string print_schema()
{
    std::string out;
    std::string section;
    for (const auto& k : scenario_schema()) {
        if (k.section != section) {
            if (!section.empty()) out += '\n';
            section = k.section;
            out += "[" + section + "]\n";
        }
        out += "# " + k.description + "\n";
        out += (k.default_value.empty() ? "# " + k.key + " =" : k.key + " = " + k.default_value) + '\n';
    }
    out += "\n# Every key can be overridden with DCSIM_<SECTION>_<KEY>, e.g. DCSIM_WORKLOAD_COUNT=500\n";
    return out;
}

EnvLookup process_env()
{
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

std::vector<std::pair<int, double>> parse_id_list(std::string_view text)
{
    std::vector<std::pair<int, double>> out;
    for (auto item : split(text, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) throw ParseError("expected id:value, got '" + std::string(item) + "'");
        out.emplace_back(static_cast<int>(parse_int(item.substr(0, colon))), parse_double(item.substr(colon + 1)));
    }
    return out;
}

namespace {

std::string env_name(const std::string& section, const std::string& key)
{
    std::string name = "DCSIM_" + section + "_" + key;
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    return name;
}

struct Value {
    std::string text;
    std::size_t line = 0;  // 0 for defaults and environment
    bool set = false;      // explicitly given
};

std::string resolve(const std::string& base_dir, const std::string& path)
{
    const std::filesystem::path p(path);
    return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

ScenarioFile parse_scenario(std::string_view text, const std::string& base_dir, const EnvLookup& env)
{
    std::map<std::pair<std::string, std::string>, Value> values;
    for (const auto& k : scenario_schema()) values[{k.section, k.key}] = Value{k.default_value, 0, false};

    std::set<std::string> seen_sections;
    for (const auto& section : parse_sections(text)) {
        if (section.name.empty()) throw ParseError("key outside of a section", section.entries.front().line);
        if (!seen_sections.insert(section.name).second) throw ParseError("duplicate section [" + section.name + "]", section.line);
        for (const auto& kv : section.entries) {
            auto it = values.find({section.name, kv.key});
            if (it == values.end()) throw ParseError("unknown key '" + kv.key + "' in [" + section.name + "]", kv.line);
            it->second = Value{kv.value, kv.line, true};
        }
    }
    if (env) {
        for (auto& [where, value] : values)
            if (auto v = env(env_name(where.first, where.second))) value = Value{*v, 0, true};
    }

    auto raw = [&](const char* section, const char* key) -> const Value& { return values.at({section, key}); };
    auto wrap = [&](const char* section, const char* key, auto&& fn) {
        const Value& v = raw(section, key);
        try {
            return fn(v.text);
        } catch (const std::exception& e) {
            throw ParseError(std::string(section) + "." + key + ": " + e.what(), v.line);
        }
    };
    auto number = [&](const char* s, const char* k) { return wrap(s, k, [](const std::string& t) { return parse_double(t); }); };
    auto integer = [&](const char* s, const char* k) { return wrap(s, k, [](const std::string& t) { return parse_int(t); }); };
    auto text_of = [&](const char* s, const char* k) { return raw(s, k).text; };
    auto given = [&](const char* s, const char* k) { return raw(s, k).set && !raw(s, k).text.empty(); };

    ScenarioFile out;
    Scenario& sc = out.scenario;

    const std::string catalog = text_of("fleet", "catalog");
    if (catalog != "builtin") sc.catalog = wrap("fleet", "catalog", [&](const std::string& p) { return load_catalog(read_file(resolve(base_dir, p))); });
    if (!given("fleet", "pms")) throw ParseError("fleet.pms is required");
    for (const auto& [id, count] : wrap("fleet", "pms", [](const std::string& t) { return parse_id_list(t); })) {
        if (count < 0 || count != static_cast<int>(count)) throw ParseError("fleet.pms: counts must be non-negative integers", raw("fleet", "pms").line);
        sc.pm_fleet.emplace_back(id, static_cast<int>(count));
    }

    if (given("workload", "trace")) {
        sc.workload = wrap("workload", "trace", [&](const std::string& p) { return read_trace(read_file(resolve(base_dir, p))); });
    } else {
        WorkloadSpec spec;
        spec.count = integer("workload", "count");
        spec.arrival_rate = number("workload", "arrival_rate");
        spec.mean_duration = number("workload", "mean_duration");
        spec.max_duration = number("workload", "max_duration");
        const std::string mix = text_of("workload", "type_mix");
        spec.type_mix = mix == "uniform" ? uniform_type_mix(sc.catalog)
                                         : wrap("workload", "type_mix", [](const std::string& t) {
                                               std::vector<std::pair<int, double>> m;
                                               for (auto [id, p] : parse_id_list(t)) m.emplace_back(id, p);
                                               return m;
                                           });
        const std::string mode = text_of("workload", "mode");
        if (mode == "scalar") spec.capacity_range = std::pair{number("workload", "capacity_min"), number("workload", "capacity_max")};
        else if (mode != "vector") throw ParseError("workload.mode must be 'vector' or 'scalar'", raw("workload", "mode").line);
        sc.workload = spec;
    }

    sc.policy.name = text_of("policy", "name");
    const std::string measure = text_of("policy", "utilization");
    if (measure == "cpu") sc.policy.measure = UtilizationMeasure::cpu;
    else if (measure != "integrated") throw ParseError("policy.utilization must be 'integrated' or 'cpu'", raw("policy", "utilization").line);
    sc.policy.mc_window = static_cast<std::size_t>(integer("policy", "mc_window"));
    if (text_of("policy", "migration_interval") != "none") sc.migration_interval = number("policy", "migration_interval");

    sc.power.kind = wrap("power", "scheme", [](const std::string& t) { return parse_power_scheme(t); });
    sc.power.k = number("power", "k");
    if (given("power", "p_fixed")) sc.power.p_fixed = number("power", "p_fixed");
    if (given("power", "p_f")) sc.power.p_f = number("power", "p_f");
    sc.power.f_min = number("power", "f_min");
    sc.power.sleep_power = number("power", "sleep_power");

    sc.slot_length = number("run", "slot_length");
    sc.repetitions = static_cast<int>(integer("run", "repetitions"));
    sc.seed = wrap("run", "seed", [](const std::string& t) { return parse_uint(t); });
    if (given("run", "horizon")) sc.horizon = number("run", "horizon");
    out.variant = wrap("run", "imbalance_variant", [](const std::string& t) { return parse_imbalance_variant(t); });
    if (given("run", "price_per_hour")) {
        out.pricing = Pricing{number("run", "price_per_hour"), number("run", "tracing_interval"),
                              number("run", "task_interval"), number("run", "cores_per_vm")};
    }

    validate_scenario(sc);
    return out;
}

ScenarioFile load_scenario(const std::string& path, const EnvLookup& env)
{
    const auto dir = std::filesystem::path(path).parent_path().string();
    return parse_scenario(read_file(path), dir.empty() ? "." : dir, env);
}

}  // namespace dcsim
