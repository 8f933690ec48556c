#include "dcsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "dcsim/text.hpp"

namespace dcsim {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn)
{
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<RunOutput> run_repetitions(const ScenarioFile& file, int repetitions, std::uint64_t seed_base, int jobs,
                                       bool keep_results)
{
    if (repetitions < 1) throw ValidationError("repetitions must be >= 1");
    if (jobs < 1) throw ValidationError("jobs must be >= 1");
    std::vector<RunOutput> out(static_cast<std::size_t>(repetitions));
    parallel_for(out.size(), jobs, [&](std::size_t j) {
        const auto started = std::chrono::steady_clock::now();
        SimulationResult result = run_simulation(file.scenario, seed_base + j);
        MetricReport report = summarize(result, file.scenario.power, file.pricing, file.variant);
        report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        out[j].report = std::move(report);
        if (keep_results) out[j].result = std::move(result);
    });
    return out;
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
}

}  // namespace

Aggregate execute_run(const RunPlan& plan, const EnvLookup& env)
{
    ScenarioFile file = load_scenario(plan.scenario_path, env);
    if (plan.event_log) file.scenario.record_events = true;
    const int reps = plan.repetitions.value_or(file.scenario.repetitions);
    const std::uint64_t base = plan.seed_base.value_or(file.scenario.seed);
    auto outputs = run_repetitions(file, reps, base, plan.jobs, plan.event_log);

    std::vector<MetricReport> reports;
    for (const auto& o : outputs) reports.push_back(o.report);
    Aggregate agg = aggregate(reports, file.scenario.policy.name);

    const std::filesystem::path dir(plan.out_dir);
    std::filesystem::create_directories(dir);
    if (plan.csv) {
        write_text(dir / "runs.csv", reports_csv(reports));
        write_text(dir / "aggregate.csv", aggregates_csv({agg}));
    }
    if (plan.json) {
        nlohmann::json j;
        j["runs"] = nlohmann::json::array();
        for (const auto& r : reports) j["runs"].push_back(to_json(r));
        j["aggregate"] = to_json(agg);
        write_text(dir / "report.json", j.dump(2) + "\n");
    }
    if (plan.event_log) {
        for (const auto& o : outputs)
            write_text(dir / ("events_" + std::to_string(o.result->seed) + ".csv"), write_event_log(o.result->event_log));
    }
    std::vector<std::string> timing = {"seed,wall_time_s"};
    for (const auto& r : reports) timing.push_back(std::to_string(r.seed) + "," + format_double(r.wall_time_s));
    std::string timing_text;
    for (const auto& line : timing) timing_text += line + "\n";
    write_text(dir / "timing.csv", timing_text);
    return agg;
}

std::vector<Aggregate> compare_policies(const ScenarioFile& file, const std::vector<std::string>& policies,
                                        int repetitions, std::uint64_t seed_base, int jobs)
{
    std::vector<Aggregate> out;
    for (const auto& name : policies) {
        ScenarioFile variant = file;
        variant.scenario.policy.name = name;
        validate_scenario(variant.scenario);
        std::vector<MetricReport> reports;
        for (auto& o : run_repetitions(variant, repetitions, seed_base, jobs)) reports.push_back(std::move(o.report));
        out.push_back(aggregate(reports, name));
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(const std::string& text)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (auto item : split(text, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto x = item.find('x');
        if (x == std::string_view::npos) throw ParseError("size must look like <requests>x<pms>, got '" + std::string(item) + "'");
        const auto requests = parse_uint(item.substr(0, x));
        const auto pms = parse_uint(item.substr(x + 1));
        if (requests == 0 || pms == 0) throw ParseError("sizes must be positive");
        out.emplace_back(requests, pms);
    }
    return out;
}

std::string bench_csv(const std::vector<BenchRow>& rows)
{
    std::string out = "requests,pms,wall_time_s,peak_rss_mb_approx,accepted\n";
    for (const auto& r : rows)
        out += std::to_string(r.requests) + ',' + std::to_string(r.pms) + ',' + format_double(r.wall_s) + ',' +
               format_double(r.peak_rss_mb) + ',' + format_double(r.accepted) + '\n';
    return out;
}

}  // namespace dcsim
