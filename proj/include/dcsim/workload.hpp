#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dcsim/catalog.hpp"

namespace dcsim {

/// One VM request as an interval vector: (type, start, end, capacity).
/// With `capacity` set the request is in scalar mode and demands that
/// fraction of every host resource; otherwise it demands its type's full
/// resource vector.
struct VmRequest {
    std::int64_t request_id = 0;
    int vm_type_id = 0;
    double start_time = 0;
    double end_time = 0;
    std::optional<double> capacity;

    double duration() const { return end_time - start_time; }

    friend bool operator==(const VmRequest&, const VmRequest&) = default;
};

struct WorkloadSpec {
    std::int64_t count = 0;
    double arrival_rate = 1.0;   // Poisson lambda, requests/s
    double mean_duration = 1.0;  // exponential mean, s
    double max_duration = 1.0;   // truncation cap, s
    std::vector<std::pair<int, double>> type_mix;  // (vm_type_id, probability)
    /// Scalar mode: capacity drawn uniformly from (lo, hi]. Absent means
    /// multi-dimensional mode.
    std::optional<std::pair<double, double>> capacity_range;
    std::uint64_t seed = 0;
};

/// Throws ValidationError if the spec is inconsistent in itself or with `catalog`.
void validate_workload_spec(const WorkloadSpec& spec, const Catalog& catalog);

/// Uniform mix over every VM type in the catalog.
std::vector<std::pair<int, double>> uniform_type_mix(const Catalog& catalog);

/// Exactly `spec.count` requests with ids 1..count, sorted by start time.
/// Per request the stream draws, in order: inter-arrival gap, duration,
/// type, then capacity (scalar mode only).
std::vector<VmRequest> generate_workload(const WorkloadSpec& spec, const Catalog& catalog);

/// CSV with header `request_id,vm_type_id,start_time,end_time,capacity`.
std::vector<VmRequest> read_trace(std::string_view csv);
std::string write_trace(const std::vector<VmRequest>& requests);

/// Throws ValidationError if a request violates its own invariants.
void check_request(const VmRequest& r);

}  // namespace dcsim
