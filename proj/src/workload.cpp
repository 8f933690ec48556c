#include "dcsim/workload.hpp"

#include <cmath>
#include <sstream>

#include "dcsim/rng.hpp"
#include "dcsim/text.hpp"

namespace dcsim {

namespace {
constexpr std::string_view trace_header = "request_id,vm_type_id,start_time,end_time,capacity";
}

void check_request(const VmRequest& r)
{
    if (!(r.start_time >= 0)) throw ValidationError("request " + std::to_string(r.request_id) + ": start_time must be >= 0");
    if (!(r.end_time > r.start_time))
        throw ValidationError("request " + std::to_string(r.request_id) + ": end_time must exceed start_time");
    if (r.capacity && !(*r.capacity > 0 && *r.capacity <= 1))
        throw ValidationError("request " + std::to_string(r.request_id) + ": capacity must be in (0, 1]");
}

void validate_workload_spec(const WorkloadSpec& spec, const Catalog& catalog)
{
    if (spec.count <= 0) throw ValidationError("workload count must be positive");
    if (!(spec.arrival_rate > 0)) throw ValidationError("arrival_rate must be positive");
    if (!(spec.mean_duration > 0)) throw ValidationError("mean_duration must be positive");
    if (!(spec.max_duration > 0)) throw ValidationError("max_duration must be positive");
    if (spec.type_mix.empty()) throw ValidationError("type_mix is empty");
    double total = 0;
    for (const auto& [id, p] : spec.type_mix) {
        if (!catalog.find_vm(id)) throw ValidationError("type_mix references unknown VM type_id " + std::to_string(id));
        if (!(p >= 0)) throw ValidationError("type_mix probabilities must be >= 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ValidationError("type_mix must sum to 1, got " + format_double(total));
    if (spec.capacity_range) {
        const auto [lo, hi] = *spec.capacity_range;
        if (!(lo >= 0 && lo < hi && hi <= 1)) throw ValidationError("capacity range must satisfy 0 <= lo < hi <= 1");
    }
}

std::vector<std::pair<int, double>> uniform_type_mix(const Catalog& catalog)
{
    std::vector<std::pair<int, double>> mix;
    const double p = 1.0 / static_cast<double>(catalog.vm_types.size());
    for (const auto& t : catalog.vm_types) mix.emplace_back(t.type_id, p);
    return mix;
}

std::vector<VmRequest> generate_workload(const WorkloadSpec& spec, const Catalog& catalog)
{
    validate_workload_spec(spec, catalog);

    std::vector<double> cumulative;
    cumulative.reserve(spec.type_mix.size());
    double acc = 0;
    for (const auto& entry : spec.type_mix) cumulative.push_back(acc += entry.second);

    Rng rng = Rng(spec.seed).split(1);
    std::vector<VmRequest> out;
    out.reserve(static_cast<std::size_t>(spec.count));
    double clock = 0;
    for (std::int64_t i = 0; i < spec.count; ++i) {
        clock += rng.exponential(1.0 / spec.arrival_rate);
        const double duration = std::min(rng.exponential(spec.mean_duration), spec.max_duration);

        const double u = rng.uniform_open() * acc;
        std::size_t k = 0;
        while (k + 1 < cumulative.size() && (u >= cumulative[k] || spec.type_mix[k].second == 0)) ++k;

        VmRequest r;
        r.request_id = i + 1;
        r.vm_type_id = spec.type_mix[k].first;
        r.start_time = clock;
        r.end_time = clock + duration;
        if (spec.capacity_range) {
            const auto [lo, hi] = *spec.capacity_range;
            // (lo, hi]
            r.capacity = hi - (hi - lo) * (1.0 - rng.uniform_open());
        }
        // A duration below the ulp of a large clock can collapse the interval.
        if (!(r.end_time > r.start_time)) r.end_time = std::nextafter(r.start_time, INFINITY);
        out.push_back(r);
    }
    return out;
}

std::vector<VmRequest> read_trace(std::string_view csv)
{
    std::vector<VmRequest> out;
    std::size_t line_no = 0;
    bool header_seen = false;
    for (auto line : split(csv, '\n')) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (trim(line).empty()) continue;
        if (!header_seen) {
            if (trim(line) != trace_header) throw ParseError("expected header '" + std::string(trace_header) + "'", line_no);
            header_seen = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 5) throw ParseError("expected 5 fields, got " + std::to_string(fields.size()), line_no);
        VmRequest r;
        try {
            r.request_id = parse_int(fields[0]);
            r.vm_type_id = static_cast<int>(parse_int(fields[1]));
            r.start_time = parse_double(fields[2]);
            r.end_time = parse_double(fields[3]);
            if (!trim(fields[4]).empty()) r.capacity = parse_double(fields[4]);
            check_request(r);
        } catch (const std::runtime_error& e) {
            throw ParseError(std::string("row ") + std::to_string(out.size() + 1) + ": " + e.what(), line_no);
        }
        out.push_back(r);
    }
    return out;
}

std::string write_trace(const std::vector<VmRequest>& requests)
{
    std::string out(trace_header);
    out += '\n';
    for (const auto& r : requests) {
        out += std::to_string(r.request_id);
        out += ',';
        out += std::to_string(r.vm_type_id);
        out += ',';
        out += format_double(r.start_time);
        out += ',';
        out += format_double(r.end_time);
        out += ',';
        if (r.capacity) out += format_double(*r.capacity);
        out += '\n';
    }
    return out;
}

}  // namespace dcsim
