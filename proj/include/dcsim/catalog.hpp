#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace dcsim {

/// Resource vector ordered (cpu, mem, bw). Used for capacities and for
/// demands expressed as fractions of a host's capacity.
using Resources = Eigen::Array3d;

/// Virtual machine type. `bw` keeps the catalog's opaque "G" unit and is only
/// ever compared against a PM's `bw`.
struct VmType {
    int type_id = 0;
    double cpu_units = 0;  // EC2 Compute Units, aggregate over cores
    int cpu_cores = 0;
    double mem_gb = 0;
    double bw = 0;

    double units_per_core() const { return cpu_units / cpu_cores; }
    Resources capacity() const { return {cpu_units, mem_gb, bw}; }

    friend bool operator==(const VmType&, const VmType&) = default;
};

struct PmType {
    int type_id = 0;
    double cpu_units = 0;
    int cpu_cores = 0;
    double mem_gb = 0;
    double bw = 0;
    double p_min = 0;  // idle watts
    double p_max = 0;  // full-load watts

    double units_per_core() const { return cpu_units / cpu_cores; }
    Resources capacity() const { return {cpu_units, mem_gb, bw}; }

    friend bool operator==(const PmType&, const PmType&) = default;
};

/// Immutable once built; share freely between runs.
struct Catalog {
    std::vector<VmType> vm_types;
    std::vector<PmType> pm_types;

    const VmType* find_vm(int type_id) const;
    const PmType* find_pm(int type_id) const;
    const VmType& vm(int type_id) const;  // throws ValidationError
    const PmType& pm(int type_id) const;  // throws ValidationError

    friend bool operator==(const Catalog&, const Catalog&) = default;
};

struct CatalogViolation {
    enum class Kind { duplicate_id, non_positive_field, power_bounds, unallocatable };
    Kind kind;
    bool is_vm;
    int type_id;
    std::string message;
};

/// The eight EC2 VM types and three PM types with their published values.
Catalog builtin_ec2_catalog();

std::vector<CatalogViolation> validate_catalog(const Catalog& catalog);

/// Parses `[vm]` / `[pm]` sections. Throws ParseError for malformed text or
/// unknown keys, ValidationError naming the offending type for rule breaks.
Catalog load_catalog(std::string_view text);
std::string serialize_catalog(const Catalog& catalog);

/// Demand of `vm` on a host of type `pm`, as fractions of the host capacity.
Resources demand_fraction(const VmType& vm, const PmType& pm);

}  // namespace dcsim
