#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dcsim/keyvalue.hpp"
#include "dcsim/runner.hpp"
#include "dcsim/text.hpp"

using namespace dcsim;

namespace {

void write_or_print(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << text;
}

void print_aggregate_summary(const Aggregate& a)
{
    std::cout << a.label << ": " << a.runs << " run(s), workload " << hex64(a.workload_hash) << '\n';
    for (const auto& c : a.columns) {
        std::cout << "  " << c.name << " = " << format_double(c.mean);
        if (c.ci) std::cout << "  [" << format_double(c.ci->lower) << ", " << format_double(c.ci->upper) << "]";
        std::cout << '\n';
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Seeded discrete-event simulator for IaaS datacenters"};
    app.require_subcommand(0, 1);

    bool print_schema_flag = false;
    app.add_flag("--print-schema", print_schema_flag, "Print the scenario file schema and exit");

    RunPlan plan;
    std::string format = "csv";
    bool event_log = false;
    auto* run = app.add_subcommand("run", "Run repetitions of a scenario and write reports");
    run->add_option("scenario", plan.scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--reps", plan.repetitions, "Override the number of repetitions")->check(CLI::PositiveNumber);
    run->add_option("--seed", plan.seed_base, "Base seed (repetition j uses seed + j)");
    run->add_option("--jobs", plan.jobs, "Parallel runs")->check(CLI::PositiveNumber);
    run->add_option("--out", plan.out_dir, "Output directory");
    run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    run->add_flag("--event-log", event_log, "Also write events_<seed>.csv per run");

    std::string cmp_scenario, cmp_policies, cmp_out = ".";
    std::optional<int> cmp_reps;
    std::optional<std::uint64_t> cmp_seed;
    int cmp_jobs = 1;
    auto* compare = app.add_subcommand("compare", "Compare placement policies on identical workloads");
    compare->add_option("scenario", cmp_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    compare->add_option("--policies", cmp_policies, "Comma-separated policy names")->required();
    compare->add_option("--reps", cmp_reps, "Override repetitions")->check(CLI::PositiveNumber);
    compare->add_option("--seed", cmp_seed, "Base seed");
    compare->add_option("--jobs", cmp_jobs, "Parallel runs")->check(CLI::PositiveNumber);
    compare->add_option("--out", cmp_out, "Output directory");

    std::string sizes_text, bench_out;
    auto* bench = app.add_subcommand("bench", "Wall time and peak memory per (requests x pms) size");
    bench->add_option("--sizes", sizes_text, "e.g. 1000x100,10000x1000")->required();
    bench->add_option("--out", bench_out, "CSV output file (default stdout)");

    auto* trace = app.add_subcommand("trace", "Generate or check request traces");
    trace->require_subcommand(1);
    std::string gen_scenario, gen_out;
    std::optional<std::uint64_t> gen_seed;
    auto* gen = trace->add_subcommand("gen", "Write the workload of a scenario as a trace CSV");
    gen->add_option("scenario", gen_scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    gen->add_option("--seed", gen_seed, "Seed (default: scenario seed)");
    gen->add_option("--out", gen_out, "Output file (default stdout)");
    std::string check_path, check_catalog = "builtin";
    auto* check = trace->add_subcommand("check", "Validate a trace CSV against a catalog");
    check->add_option("trace", check_path, "Trace CSV")->required()->check(CLI::ExistingFile);
    check->add_option("--catalog", check_catalog, "'builtin' or catalog file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (print_schema_flag) {
            std::cout << print_schema();
            return 0;
        }
        if (*run) {
            plan.csv = format == "csv";
            plan.json = format == "json";
            plan.event_log = event_log;
            print_aggregate_summary(execute_run(plan, process_env()));
            return 0;
        }
        if (*compare) {
            const ScenarioFile file = load_scenario(cmp_scenario, process_env());
            std::vector<std::string> policies;
            for (auto p : split(cmp_policies, ','))
                if (!trim(p).empty()) policies.emplace_back(trim(p));
            const auto rows = compare_policies(file, policies, cmp_reps.value_or(file.scenario.repetitions),
                                               cmp_seed.value_or(file.scenario.seed), cmp_jobs);
            std::filesystem::create_directories(cmp_out);
            write_or_print((std::filesystem::path(cmp_out) / "comparison.csv").string(), aggregates_csv(rows));
            for (const auto& a : rows) print_aggregate_summary(a);
            return 0;
        }
        if (*bench) {
            std::vector<BenchRow> rows;
            for (const auto& [requests, pms] : parse_sizes(sizes_text)) rows.push_back(bench_one(requests, pms));
            write_or_print(bench_out, bench_csv(rows));
            return 0;
        }
        if (*gen) {
            const ScenarioFile file = load_scenario(gen_scenario, process_env());
            write_or_print(gen_out, write_trace(materialize_workload(file.scenario, gen_seed.value_or(file.scenario.seed))));
            return 0;
        }
        if (*check) {
            const Catalog catalog = check_catalog == "builtin" ? builtin_ec2_catalog() : load_catalog(read_file(check_catalog));
            const auto requests = read_trace(read_file(check_path));
            for (const auto& r : requests) catalog.vm(r.vm_type_id);
            std::cout << requests.size() << " requests OK, workload " << hex64(fnv1a64(write_trace(requests))) << '\n';
            return 0;
        }
        std::cout << app.help();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "sim: " << e.what() << '\n';
        return 1;
    }
}
