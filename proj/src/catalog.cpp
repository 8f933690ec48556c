#include "dcsim/catalog.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dcsim/keyvalue.hpp"
#include "dcsim/text.hpp"

namespace dcsim {

const VmType* Catalog::find_vm(int type_id) const
{
    auto it = std::find_if(vm_types.begin(), vm_types.end(), [&](const VmType& t) { return t.type_id == type_id; });
    return it == vm_types.end() ? nullptr : &*it;
}

const PmType* Catalog::find_pm(int type_id) const
{
    auto it = std::find_if(pm_types.begin(), pm_types.end(), [&](const PmType& t) { return t.type_id == type_id; });
    return it == pm_types.end() ? nullptr : &*it;
}

const VmType& Catalog::vm(int type_id) const
{
    if (auto* t = find_vm(type_id)) return *t;
    throw ValidationError("unknown VM type_id " + std::to_string(type_id));
}

const PmType& Catalog::pm(int type_id) const
{
    if (auto* t = find_pm(type_id)) return *t;
    throw ValidationError("unknown PM type_id " + std::to_string(type_id));
}

Catalog builtin_ec2_catalog()
{
    Catalog c;
    // type_id, cpu_units, cores, mem_gb, bw
    c.vm_types = {
        {1, 1.0, 1, 1.7, 160},
        {2, 4.0, 2, 7.5, 850},
        {3, 8.0, 4, 15.0, 1690},
        {4, 6.5, 2, 17.1, 420},
        {5, 13.0, 4, 34.2, 850},
        {6, 26.0, 8, 68.4, 1690},
        {7, 5.0, 2, 1.7, 350},
        {8, 20.0, 8, 7.0, 1690},
    };
    // type_id, cpu_units, cores, mem_gb, bw, p_min, p_max
    c.pm_types = {
        {1, 16.0, 4, 30.0, 3380, 210, 300},
        {2, 52.0, 16, 136.8, 3380, 420, 600},
        {3, 40.0, 16, 14.0, 3380, 350, 500},
    };
    return c;
}

Resources demand_fraction(const VmType& vm, const PmType& pm)
{
    return vm.capacity() / pm.capacity();
}

std::vector<CatalogViolation> validate_catalog(const Catalog& catalog)
{
    using Kind = CatalogViolation::Kind;
    std::vector<CatalogViolation> out;
    auto add = [&](Kind k, bool vm, int id, std::string msg) {
        out.push_back({k, vm, id, (vm ? "VM type " : "PM type ") + std::to_string(id) + ": " + std::move(msg)});
    };

    std::set<int> seen;
    for (const auto& t : catalog.vm_types) {
        if (!seen.insert(t.type_id).second) add(Kind::duplicate_id, true, t.type_id, "duplicate id");
        if (!(t.cpu_units > 0 && t.cpu_cores >= 1 && t.mem_gb > 0 && t.bw > 0))
            add(Kind::non_positive_field, true, t.type_id, "resource fields must be positive");
    }
    seen.clear();
    for (const auto& t : catalog.pm_types) {
        if (!seen.insert(t.type_id).second) add(Kind::duplicate_id, false, t.type_id, "duplicate id");
        if (!(t.cpu_units > 0 && t.cpu_cores >= 1 && t.mem_gb > 0 && t.bw > 0))
            add(Kind::non_positive_field, false, t.type_id, "resource fields must be positive");
        if (!(t.p_min > 0 && t.p_min < t.p_max))
            add(Kind::power_bounds, false, t.type_id, "requires 0 < p_min < p_max");
    }

    for (const auto& vm : catalog.vm_types) {
        const bool fits = std::any_of(catalog.pm_types.begin(), catalog.pm_types.end(), [&](const PmType& pm) {
            return (vm.capacity() <= pm.capacity()).all();
        });
        if (!fits) add(Kind::unallocatable, true, vm.type_id, "unallocatable type: exceeds every PM type on some resource");
    }
    return out;
}

namespace {

double number_field(const KeyValue& kv)
{
    try {
        return parse_double(kv.value);
    } catch (const ParseError& e) {
        throw ParseError(kv.key + ": " + e.what(), kv.line);
    }
}

int integer_field(const KeyValue& kv)
{
    try {
        return static_cast<int>(parse_int(kv.value));
    } catch (const ParseError& e) {
        throw ParseError(kv.key + ": " + e.what(), kv.line);
    }
}

}  // namespace

Catalog load_catalog(std::string_view text)
{
    Catalog c;
    for (const auto& section : parse_sections(text)) {
        const bool is_vm = section.name == "vm";
        if (!is_vm && section.name != "pm")
            throw ParseError("unknown section '" + section.name + "' (expected [vm] or [pm])", section.line);

        std::set<std::string> required = {"type_id", "cpu_units", "cpu_cores", "mem_gb", "bw"};
        if (!is_vm) required.insert({"p_min_w", "p_max_w"});

        PmType t;
        for (const auto& kv : section.entries) {
            if (!required.count(kv.key)) throw ParseError("unknown key '" + kv.key + "'", kv.line);
            if (kv.key == "type_id") t.type_id = integer_field(kv);
            else if (kv.key == "cpu_cores") t.cpu_cores = integer_field(kv);
            else if (kv.key == "cpu_units") t.cpu_units = number_field(kv);
            else if (kv.key == "mem_gb") t.mem_gb = number_field(kv);
            else if (kv.key == "bw") t.bw = number_field(kv);
            else if (kv.key == "p_min_w") t.p_min = number_field(kv);
            else if (kv.key == "p_max_w") t.p_max = number_field(kv);
        }
        for (const auto& key : required)
            if (!section.find(key)) throw ParseError("missing field '" + key + "'", section.line);

        if (is_vm) c.vm_types.push_back(VmType{t.type_id, t.cpu_units, t.cpu_cores, t.mem_gb, t.bw});
        else c.pm_types.push_back(t);
    }

    if (auto violations = validate_catalog(c); !violations.empty()) throw ValidationError(violations.front().message);
    return c;
}

std::string serialize_catalog(const Catalog& catalog)
{
    std::ostringstream out;
    for (const auto& t : catalog.vm_types) {
        out << "[vm]\n"
            << "type_id = " << t.type_id << '\n'
            << "cpu_units = " << format_double(t.cpu_units) << '\n'
            << "cpu_cores = " << t.cpu_cores << '\n'
            << "mem_gb = " << format_double(t.mem_gb) << '\n'
            << "bw = " << format_double(t.bw) << "\n\n";
    }
    for (const auto& t : catalog.pm_types) {
        out << "[pm]\n"
            << "type_id = " << t.type_id << '\n'
            << "cpu_units = " << format_double(t.cpu_units) << '\n'
            << "cpu_cores = " << t.cpu_cores << '\n'
            << "mem_gb = " << format_double(t.mem_gb) << '\n'
            << "bw = " << format_double(t.bw) << '\n'
            << "p_min_w = " << format_double(t.p_min) << '\n'
            << "p_max_w = " << format_double(t.p_max) << "\n\n";
    }
    return out.str();
}

}  // namespace dcsim
