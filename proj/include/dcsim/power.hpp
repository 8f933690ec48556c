#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dcsim/catalog.hpp"

namespace dcsim {

enum class PowerSchemeKind { npa, linear, dvfs, dns_dvfs };

/// Power-management scheme of a run.
///
/// - npa: host draws p_max whenever on; hosts never sleep.
/// - linear: P(u) = k*p_max + (1-k)*p_max*u; idle hosts sleep.
/// - dvfs: P(f) = p_fixed + p_f*f^3 with f = clamp(u, f_min, 1); never sleeps.
/// - dns_dvfs: dvfs while on; idle hosts sleep.
///
/// When `p_fixed`/`p_f` are unset they come from the host type:
/// p_fixed = p_min, p_f = p_max - p_min, so f = 1 draws p_max.
struct PowerScheme {
    PowerSchemeKind kind = PowerSchemeKind::linear;
    double k = 0.7;
    std::optional<double> p_fixed;
    std::optional<double> p_f;
    double f_min = 0.1;
    double sleep_power = 0.0;

    bool allows_sleep() const { return kind == PowerSchemeKind::linear || kind == PowerSchemeKind::dns_dvfs; }
};

std::string_view to_string(PowerSchemeKind kind);
/// Accepts npa, linear, dvfs, dns_dvfs (also "dns+dvfs"). Throws ValidationError.
PowerSchemeKind parse_power_scheme(std::string_view name);

void validate_power_scheme(const PowerScheme& scheme);

/// Watts drawn by a host of type `pm` at CPU utilization `u` in [0, 1].
/// A sleeping host draws `scheme.sleep_power`. Throws std::domain_error
/// when u is outside [0, 1] by more than 1e-9.
double instantaneous_power(const PowerScheme& scheme, const PmType& pm, double u, bool on = true);

}  // namespace dcsim
