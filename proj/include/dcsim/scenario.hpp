#pragma once

// Scenario files: sectioned key-value text with the sections [fleet],
// [workload], [policy], [power] and [run]. `scenario_schema()` lists every
// key; each can be overridden through the environment variable
// DCSIM_<SECTION>_<KEY> (upper case), e.g. DCSIM_WORKLOAD_COUNT=500.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcsim/engine.hpp"
#include "dcsim/report.hpp"

namespace dcsim {

struct SchemaKey {
    std::string section;
    std::string key;
    std::string default_value;  // empty: optional / unset
    std::string description;
};

const std::vector<SchemaKey>& scenario_schema();
std::string print_schema();

/// Settings that travel with a scenario but are not part of a single run.
struct ScenarioFile {
    Scenario scenario;
    ImbalanceVariant variant = ImbalanceVariant::per_server;
    std::optional<Pricing> pricing;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Reads the process environment.
EnvLookup process_env();

/// Parses scenario text. Relative `catalog`/`trace` paths resolve against
/// `base_dir`. Throws ParseError (with line) or ValidationError.
ScenarioFile parse_scenario(std::string_view text, const std::string& base_dir = ".", const EnvLookup& env = {});
ScenarioFile load_scenario(const std::string& path, const EnvLookup& env = {});

/// "1:34,2:33" style list of integer id to number.
std::vector<std::pair<int, double>> parse_id_list(std::string_view text);

}  // namespace dcsim
