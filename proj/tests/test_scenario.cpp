#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "dcsim/keyvalue.hpp"
#include "dcsim/scenario.hpp"
#include "dcsim/text.hpp"

using namespace dcsim;

namespace {

const char* minimal = "[fleet]\npms = 1:2\n";

EnvLookup env_of(std::map<std::string, std::string> vars)
{
    return [vars](const std::string& name) -> std::optional<std::string> {
        auto it = vars.find(name);
        if (it == vars.end()) return std::nullopt;
        return it->second;
    };
}

}  // namespace

TEST_CASE("example scenario")
{
    const auto f = load_scenario(std::string(DCSIM_SOURCE_DIR) + "/docs/example_scenario.ini");
    const Scenario& s = f.scenario;
    CHECK(s.pm_fleet == std::vector<std::pair<int, int>>{{1, 34}, {2, 33}, {3, 33}});
    const auto& w = std::get<WorkloadSpec>(s.workload);
    CHECK(w.count == 1000);
    CHECK(w.arrival_rate == 2);
    CHECK(w.max_duration == 500);
    CHECK(w.type_mix.size() == 8);
    CHECK_FALSE(w.capacity_range.has_value());
    CHECK(s.policy.name == "lif");
    CHECK_FALSE(s.migration_interval.has_value());
    CHECK(s.power.kind == PowerSchemeKind::linear);
    CHECK(s.repetitions == 6);
    CHECK(s.seed == 1);
    CHECK(f.variant == ImbalanceVariant::per_server);
    CHECK_FALSE(f.pricing.has_value());
}

TEST_CASE("defaults and optional keys")
{
    const auto f = parse_scenario(std::string(minimal) +
                                  "[workload]\nmode = scalar\ncapacity_max = 0.3\ntype_mix = 1:0.25,2:0.75\n"
                                  "[policy]\nname = mc\nmc_window = 6\nmigration_interval = 5\n"
                                  "[power]\nscheme = dns+dvfs\np_fixed = 100\np_f = 20\n"
                                  "[run]\nhorizon = 60\nimbalance_variant = literal\nprice_per_hour = 0.1\n");
    const auto& w = std::get<WorkloadSpec>(f.scenario.workload);
    REQUIRE(w.capacity_range.has_value());
    CHECK(w.capacity_range->second == 0.3);
    CHECK(w.type_mix == std::vector<std::pair<int, double>>{{1, 0.25}, {2, 0.75}});
    CHECK(f.scenario.policy.mc_window == 6);
    CHECK(f.scenario.migration_interval == 5.0);
    CHECK(f.scenario.power.kind == PowerSchemeKind::dns_dvfs);
    CHECK(f.scenario.power.p_fixed == 100.0);
    CHECK(f.scenario.horizon == 60.0);
    CHECK(f.variant == ImbalanceVariant::literal);
    REQUIRE(f.pricing.has_value());
    CHECK(f.pricing->price_per_hour == 0.1);
}

TEST_CASE("environment overrides")
{
    const auto f = parse_scenario(std::string(minimal) + "[workload]\ncount = 10\n", ".",
                                  env_of({{"DCSIM_WORKLOAD_COUNT", "500"}, {"DCSIM_POLICY_NAME", "random"}}));
    CHECK(std::get<WorkloadSpec>(f.scenario.workload).count == 500);
    CHECK(f.scenario.policy.name == "random");
    CHECK_THROWS_AS(parse_scenario(minimal, ".", env_of({{"DCSIM_RUN_SEED", "abc"}})), ParseError);
}

TEST_CASE("scenario errors")
{
    try {
        parse_scenario(std::string(minimal) + "[workload]\ncount = 10\nspeed = 3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
    }
    CHECK_THROWS_AS(parse_scenario("[workload]\ncount = 10\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario(std::string(minimal) + "[gpu]\nx = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario(std::string(minimal) + "[policy]\nname = zhjz\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario(std::string(minimal) + "[run]\nslot_length = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse_scenario(std::string(minimal) + "[workload]\nmode = both\n"), ParseError);
    CHECK_THROWS_AS(parse_scenario("[fleet]\npms = 1:2\npms = 1:3\n"), ParseError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.ini"), std::runtime_error);
}

TEST_CASE("trace and catalog paths resolve against the scenario directory")
{
    const auto dir = std::filesystem::temp_directory_path() / "dcsim_scenario_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "trace.csv") << "request_id,vm_type_id,start_time,end_time,capacity\n1,1,0,6,0.25\n2,1,1,5,0.5\n";
        std::ofstream(dir / "small.cat") << "[vm]\ntype_id = 1\ncpu_units = 1\ncpu_cores = 1\nmem_gb = 1\nbw = 1\n\n"
                                            "[pm]\ntype_id = 1\ncpu_units = 4\ncpu_cores = 4\nmem_gb = 4\nbw = 4\np_min_w = 70\np_max_w = 100\n";
        std::ofstream(dir / "s.ini") << "[fleet]\ncatalog = small.cat\npms = 1:2\n[workload]\ntrace = trace.csv\n";
    }
    const auto f = load_scenario((dir / "s.ini").string());
    const auto& trace = std::get<std::vector<VmRequest>>(f.scenario.workload);
    REQUIRE(trace.size() == 2);
    CHECK(trace[1].capacity == 0.5);
    CHECK(f.scenario.catalog.pm_types.size() == 1);
    CHECK(f.scenario.catalog.pm(1).p_max == 100);
    std::filesystem::remove_all(dir);
}

TEST_CASE("schema lists every section")
{
    const std::string schema = print_schema();
    for (const char* section : {"[fleet]", "[workload]", "[policy]", "[power]", "[run]"})
        CHECK(schema.find(section) != std::string::npos);
    CHECK(schema.find("DCSIM_") != std::string::npos);
    for (const auto& key : scenario_schema()) CHECK(schema.find(key.key) != std::string::npos);
}

TEST_CASE("key-value parsing")
{
    const auto sections = parse_sections("# comment\n[a]\nx = 1 ; trailing\n; another\n[b]\ny=two words\n");
    REQUIRE(sections.size() == 2);
    CHECK(sections[0].name == "a");
    REQUIRE(sections[0].find("x"));
    CHECK(sections[0].find("x")->value == "1");
    CHECK(sections[1].find("y")->value == "two words");
    CHECK(sections[1].find("y")->line == 6);
    CHECK_THROWS_AS(parse_sections("[a]\nnovalue\n"), ParseError);
    CHECK_THROWS_AS(parse_sections("[a\n"), ParseError);
}

TEST_CASE("id lists")
{
    CHECK(parse_id_list("1:34, 2:33,3:33") == std::vector<std::pair<int, double>>{{1, 34}, {2, 33}, {3, 33}});
    CHECK_THROWS_AS(parse_id_list("1-34"), ParseError);
}
