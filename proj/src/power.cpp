#include "dcsim/power.hpp"

#include <algorithm>
#include <stdexcept>

#include "dcsim/text.hpp"

namespace dcsim {

std::string_view to_string(PowerSchemeKind kind)
{
    switch (kind) {
    case PowerSchemeKind::npa: return "npa";
    case PowerSchemeKind::linear: return "linear";
    case PowerSchemeKind::dvfs: return "dvfs";
    case PowerSchemeKind::dns_dvfs: return "dns_dvfs";
    }
    return "?";
}

PowerSchemeKind parse_power_scheme(std::string_view name)
{
    if (name == "npa") return PowerSchemeKind::npa;
    if (name == "linear") return PowerSchemeKind::linear;
    if (name == "dvfs") return PowerSchemeKind::dvfs;
    if (name == "dns_dvfs" || name == "dns+dvfs") return PowerSchemeKind::dns_dvfs;
    throw ValidationError("unknown power scheme '" + std::string(name) + "'");
}

void validate_power_scheme(const PowerScheme& s)
{
    if (s.kind == PowerSchemeKind::linear && !(s.k > 0 && s.k < 1)) throw ValidationError("power.k must be in (0, 1)");
    if (s.p_fixed && !(*s.p_fixed > 0)) throw ValidationError("power.p_fixed must be positive");
    if (s.p_f && !(*s.p_f > 0)) throw ValidationError("power.p_f must be positive");
    if (!(s.f_min > 0 && s.f_min <= 1)) throw ValidationError("power.f_min must be in (0, 1]");
    if (!(s.sleep_power >= 0)) throw ValidationError("power.sleep_power must be >= 0");
}

double instantaneous_power(const PowerScheme& s, const PmType& pm, double u, bool on)
{
    if (!(u >= -1e-9 && u <= 1 + 1e-9)) throw std::domain_error("utilization " + format_double(u) + " outside [0, 1]");
    u = std::clamp(u, 0.0, 1.0);
    if (!on) return s.sleep_power;

    switch (s.kind) {
    case PowerSchemeKind::npa:
        return pm.p_max;
    case PowerSchemeKind::linear:
        return s.k * pm.p_max + (1 - s.k) * pm.p_max * u;
    case PowerSchemeKind::dvfs:
    case PowerSchemeKind::dns_dvfs: {
        const double p_fixed = s.p_fixed.value_or(pm.p_min);
        const double p_f = s.p_f.value_or(pm.p_max - pm.p_min);
        const double f = std::clamp(u, s.f_min, 1.0);
        return p_fixed + p_f * f * f * f;
    }
    }
    return 0;
}

}  // namespace dcsim
