// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dcsim/engine.hpp"
#include "dcsim/metrics.hpp"
#include "dcsim/report.hpp"
#include "dcsim/rng.hpp"
#include "dcsim/runner.hpp"
#include "dcsim/text.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dcsim;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why)
    {
        if (!ok && pass) detail = why;
        pass = pass && ok;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

WorkloadSpec generated(std::int64_t count, double rate, double mean, double cap, const Catalog& catalog)
{
    WorkloadSpec w;
    w.count = count;
    w.arrival_rate = rate;
    w.mean_duration = mean;
    w.max_duration = cap;
    w.type_mix = uniform_type_mix(catalog);
    return w;
}

std::map<std::string, std::string> parse_detail(const std::string& detail)
{
    std::map<std::string, std::string> out;
    for (auto item : split(detail, ';')) {
        const auto eq = item.find('=');
        if (eq != std::string_view::npos) out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    }
    return out;
}

// 1 -------------------------------------------------------------------------
Outcome idle_power_matches_catalog()
{
    Outcome o;
    const auto t0 = Clock::now();
    const Catalog c = builtin_ec2_catalog();
    PowerScheme linear{PowerSchemeKind::linear, 0.7};
    const double expected[] = {210, 420, 350};
    for (int id = 1; id <= 3; ++id) {
        const PmType& pm = c.pm(id);
        const double idle = linear.k * pm.p_max;
        o.require(idle == expected[id - 1] && idle == pm.p_min,
                  "PM type " + std::to_string(id) + ": k*p_max=" + format_double(idle) + " p_min=" + format_double(pm.p_min));
        o.require(instantaneous_power(linear, pm, 0.0) == pm.p_min, "linear model at u=0 differs from p_min");
    }
    const double elapsed = seconds_since(t0);
    o.require(elapsed < 1e-3, "took " + format_double(elapsed) + " s");
    if (o.pass) o.detail = "0.7*300=210, 0.7*600=420, 0.7*500=350";
    return o;
}

// 2 -------------------------------------------------------------------------
Outcome lif_has_lowest_imbalance()
{
    Outcome o;
    const auto t0 = Clock::now();
    ScenarioFile file;
    Scenario& s = file.scenario;
    s.pm_fleet = {{1, 34}, {2, 33}, {3, 33}};
    std::ostringstream table;
    for (std::int64_t count : {250, 500, 750, 1000, 1250, 1500}) {
        s.workload = generated(count, 2.0, 100, 500, s.catalog);
        const auto rows = compare_policies(file, {"lif", "random", "roundrobin"}, 6, 1, 8);
        std::map<std::string, double> mean;
        for (const auto& row : rows)
            for (const auto& col : row.columns)
                if (col.name == "ibl_avg_cdc") mean[row.label] = col.mean;
        table << ' ' << count << ":" << format_double(std::round(mean["lif"] * 1e4) / 1e4) << "/"
              << format_double(std::round(mean["random"] * 1e4) / 1e4) << "/"
              << format_double(std::round(mean["roundrobin"] * 1e4) / 1e4);
        o.require(mean["lif"] < mean["random"] && mean["lif"] < mean["roundrobin"],
                  "LIF not lowest at " + std::to_string(count) + " requests");
    }
    const double elapsed = seconds_since(t0);
    o.require(elapsed < 60, "took " + format_double(elapsed) + " s");
    o.detail = (o.pass ? "lif/random/roundrobin ibl_avg_cdc:" : o.detail + ";") + table.str();
    return o;
}

// 3 -------------------------------------------------------------------------
Outcome sleep_saves_energy()
{
    Outcome o;
    const auto t0 = Clock::now();
    const int servers[] = {100, 200, 300, 400};
    const double loads[] = {0.0, 0.3, 0.6, 1.0};
    const double window = 60, mean_duration = 10, mean_capacity = 0.25;
    const int runs = 5;

    // energy[scheme][load][servers]
    std::map<PowerSchemeKind, std::map<double, std::map<int, double>>> energy;
    for (int n : servers) {
        for (double load : loads) {
            for (auto kind : {PowerSchemeKind::dvfs, PowerSchemeKind::dns_dvfs}) {
                Scenario s;
                s.pm_fleet = {{1, n}};
                s.policy.name = "firstfit";
                s.power.kind = kind;
                s.horizon = window;
                const double rate = load * n / (mean_duration * mean_capacity);
                double sum = 0;
                for (int r = 0; r < runs; ++r) {
                    if (load == 0.0) {
                        s.workload = std::vector<VmRequest>{};
                    } else {
                        auto w = generated(static_cast<std::int64_t>(std::llround(rate * window)), rate, mean_duration,
                                           5 * mean_duration, s.catalog);
                        w.capacity_range = std::pair{0.0, 2 * mean_capacity};
                        s.workload = w;
                    }
                    const auto result = run_simulation(s, static_cast<std::uint64_t>(r + 1));
                    sum += summarize(result, s.power).energy_cdc;
                }
                energy[kind][load][n] = sum / runs;
            }
        }
    }

    auto& dvfs = energy[PowerSchemeKind::dvfs];
    auto& dns = energy[PowerSchemeKind::dns_dvfs];
    for (double load : loads) {
        for (int i = 0; i < 4; ++i) {
            const int n = servers[i];
            o.require(dns[load][n] <= dvfs[load][n], "(a) DNS+DVFS above DVFS at (" + std::to_string(n) + ", " +
                                                         format_double(load) + ")");
            if (i == 0) continue;
            const int prev = servers[i - 1];
            o.require(dvfs[load][n] > dvfs[load][prev], "(b) DVFS energy not increasing at load " + format_double(load));
            // at load 0 the sleeping fleet draws nothing at any size; (c) covers it
            if (load > 0)
                o.require(dns[load][n] > dns[load][prev], "(b) DNS+DVFS energy not increasing at load " + format_double(load));
        }
    }
    for (int n : servers) o.require(dns[0.0][n] == 0, "(c) DNS+DVFS at load 0 drew " + format_double(dns[0.0][n]) + " J");

    const double elapsed = seconds_since(t0);
    o.require(elapsed < 120, "took " + format_double(elapsed) + " s");
    if (o.pass) {
        std::ostringstream d;
        d << "E_cdc MJ dvfs/dns at (100,0.3)=" << format_double(std::round(dvfs[0.3][100] / 1e4) / 1e2) << "/"
          << format_double(std::round(dns[0.3][100] / 1e4) / 1e2) << " (400,1.0)=" << format_double(std::round(dvfs[1.0][400] / 1e4) / 1e2)
          << "/" << format_double(std::round(dns[1.0][400] / 1e4) / 1e2);
        o.detail = d.str();
    }
    return o;
}

// 4 -------------------------------------------------------------------------
Outcome migrations_only_when_they_save_power()
{
    Outcome o;
    const auto t0 = Clock::now();
    struct Config {
        std::string label, policy;
        PowerSchemeKind power;
    };
    const std::vector<Config> configs = {{"NPA", "lif", PowerSchemeKind::npa},
                                         {"DVFS", "lif", PowerSchemeKind::dvfs},
                                         {"MU", "mu", PowerSchemeKind::dns_dvfs},
                                         {"RS", "rs", PowerSchemeKind::dns_dvfs},
                                         {"MC", "mc", PowerSchemeKind::dns_dvfs}};
    std::map<std::string, double> migrations, energy;
    double mixed_dvfs = 0;
    std::size_t audited = 0;
    // Every configuration runs with a 5 s consolidation tick; the power rule
    // alone decides whether a move happens.
    for (bool mixed : {false, true}) {
        for (int hosts : {30, 60}) {
            for (std::int64_t vms : {200, 400}) {
                for (const auto& cfg : configs) {
                    Scenario s;
                    if (mixed)
                        s.pm_fleet = {{1, hosts / 3}, {2, hosts / 3}, {3, hosts / 3}};
                    else
                        s.pm_fleet = {{2, hosts}};
                    s.workload = generated(vms, vms / 100.0, 60, 300, s.catalog);
                    s.policy.name = cfg.policy;
                    s.power.kind = cfg.power;
                    s.migration_interval = 5.0;
                    s.record_events = true;
                    for (int r = 0; r < 5; ++r) {
                        const auto result = run_simulation(s, static_cast<std::uint64_t>(r + 1));
                        const auto moved = static_cast<double>(result.migration_count);
                        if (!mixed) {
                            migrations[cfg.label] += moved / 20;
                            energy[cfg.label] += summarize(result, s.power).energy_cdc / 20;
                        }
                        if (cfg.power == PowerSchemeKind::npa || (!mixed && cfg.power == PowerSchemeKind::dvfs))
                            o.require(result.migration_count == 0, cfg.label + (mixed ? " (mixed fleet)" : "") + " migrated " +
                                                                       std::to_string(result.migration_count) + " VMs");
                        if (mixed && cfg.power == PowerSchemeKind::dvfs) mixed_dvfs += moved / 20;

                        for (const auto& e : result.event_log) {
                            if (e.kind != "migrate") continue;
                            ++audited;
                            auto d = parse_detail(e.detail);
                            const PmType& from = result.pms.at(std::stoul(d["from"]) - 1).type;
                            const PmType& to = result.pms.at(static_cast<std::size_t>(e.pm_id - 1)).type;
                            auto num = [&](const char* k) { return parse_double(d.at(k)); };
                            const double before =
                                instantaneous_power(s.power, from, std::min(num("from_u"), 1.0)) +
                                instantaneous_power(s.power, to, std::min(num("to_u"), 1.0), d["to_on_before"] == "1");
                            const double after =
                                instantaneous_power(s.power, from, std::min(num("from_u_after"), 1.0), d["from_on_after"] == "1") +
                                instantaneous_power(s.power, to, std::min(num("to_u_after"), 1.0));
                            o.require(std::abs(before - num("p_before")) <= 1e-9 * before &&
                                          std::abs(after - num("p_after")) <= 1e-9 * before,
                                      "logged power differs from recomputation at t=" + format_double(e.time));
                            o.require(after < before,
                                      "migration of request " + std::to_string(e.request_id) + " did not reduce power");
                        }
                    }
                }
            }
        }
    }
    o.require(audited > 0, "no migrations to audit");
    auto two = [](double x) { return format_double(std::round(x * 100) / 100); };
    std::ostringstream d;
    d << "audited " << audited << " moves; mean migrations/energy MJ (homogeneous fleet):";
    for (const auto& cfg : configs) d << ' ' << cfg.label << "=" << two(migrations[cfg.label]) << "/" << two(energy[cfg.label] / 1e6);
    d << "; DVFS on the mixed EC2 fleet: " << two(mixed_dvfs) << " migrations/run (" << two(seconds_since(t0)) << " s)";
    o.detail = o.pass ? d.str() : o.detail + "; " + d.str();
    return o;
}

// 5 -------------------------------------------------------------------------
Outcome energy_matches_quadrature()
{
    Outcome o;
    const Catalog c = builtin_ec2_catalog();
    Rng rng(2024);
    const std::vector<PowerSchemeKind> kinds = {PowerSchemeKind::npa, PowerSchemeKind::linear, PowerSchemeKind::dvfs,
                                                PowerSchemeKind::dns_dvfs};
    double worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const PmType& pm = c.pm_types[rng.below(3)];
        const PowerScheme scheme{kinds[rng.below(4)]};
        auto power = [&](double u) { return instantaneous_power(scheme, pm, u); };

        // breaks on a grid of h = 1/1000 of the mean piece length
        const double h = rng.uniform(0.5, 5) / 1000;
        const std::size_t pieces = 1 + rng.below(40);
        StepSeries<double> s;
        std::vector<long> start_step;
        long step = 0;
        for (std::size_t k = 0; k < pieces; ++k) {
            start_step.push_back(step);
            s.times.push_back(static_cast<double>(step) * h);
            s.values.push_back(rng.below(8) ? rng.uniform(0, 1) : 0.0);
            step += 1 + static_cast<long>(rng.below(2000));
        }
        const long t0 = static_cast<long>(rng.below(static_cast<std::uint64_t>(step)));
        const long t1 = t0 + 1 + static_cast<long>(rng.below(static_cast<std::uint64_t>(step - t0 + 500)));
        const double exact = pm_energy(power, s, static_cast<double>(t0) * h, static_cast<double>(t1) * h);

        double quad = 0, comp = 0;
        std::size_t piece = 0;
        for (long k = t0; k < t1; ++k) {
            while (piece + 1 < pieces && start_step[piece + 1] <= k) ++piece;
            while (piece > 0 && start_step[piece] > k) --piece;
            const double y = power(s.values[piece]) * h - comp;
            const double t = quad + y;
            comp = (t - quad) - y;
            quad = t;
        }
        const double rel = std::abs(exact - quad) / std::abs(quad);
        worst = std::max(worst, rel);
        o.require(rel <= 1e-9, "trial " + std::to_string(trial) + ": relative error " + format_double(rel));

        const double u = s.values.front();
        const auto constant = StepSeries<double>::slotted({u}, 1.0);
        const double a = rng.uniform(0, 10), b = a + rng.uniform(0, 100);
        o.require(pm_energy(power, constant, a, b) == power(u) * (b - a), "constant-u energy is not P(u)*(t1-t0)");
    }
    if (o.pass) o.detail = "200 series, worst relative error " + format_double(worst);
    return o;
}

// 6 -------------------------------------------------------------------------
Outcome metrics_match_oracles()
{
    Outcome o;
    Rng rng(77);
    double worst = 0;
    auto close = [&](double a, double b, const std::string& what) {
        worst = std::max(worst, std::abs(a - b));
        o.require(std::abs(a - b) <= 1e-12, what + " off by " + format_double(std::abs(a - b)));
    };
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = static_cast<Eigen::Index>(1 + rng.below(20));
        UtilizationSnapshot<double> s{ServerMatrix<double>(n, 3), ServerMatrix<double>(n, 3)};
        std::vector<oracle::Server> ref;
        for (Eigen::Index i = 0; i < n; ++i) {
            oracle::Server x{{rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1)},
                             {static_cast<double>(1 + rng.below(16)), rng.uniform(1, 200), rng.uniform(100, 5000)}};
            for (int r = 0; r < 3; ++r) {
                s.utilization(i, r) = x.u[r];
                s.weights(i, r) = x.w[r];
            }
            ref.push_back(x);
        }
        const auto avg = avg_utilization(s);
        const auto avg_ref = oracle::dc_average(ref);
        const auto ibl = resource_imbalance(s);
        const auto ibl_ref = oracle::ibl_resource(ref);
        for (int r = 0; r < 3; ++r) {
            close(avg(r), avg_ref[r], "datacenter average");
            close(ibl(r), ibl_ref[r], "resource imbalance");
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            close(server_imbalance(s, i, ImbalanceVariant::per_server), oracle::ilb_per_server(ref[static_cast<std::size_t>(i)]),
                  "per-server ILB");
            close(server_imbalance(s, i, ImbalanceVariant::literal), oracle::ilb_literal(ref, static_cast<std::size_t>(i)),
                  "literal ILB");
        }
        for (bool literal : {false, true}) {
            const auto v = literal ? ImbalanceVariant::literal : ImbalanceVariant::per_server;
            close(total_imbalance(s, v), oracle::ibl_tot(ref, literal), "IBL_tot");
            close(avg_imbalance_pm(s, v), oracle::ibl_tot(ref, literal) / static_cast<double>(n), "IBL_avg_pm");
        }
        close(avg_imbalance_cdc(s), oracle::ibl_avg_cdc(ref), "IBL_avg_cdc");
    }

    const std::vector<double> four = {1, 2, 3, 4};
    const auto ci = confidence_interval(four);
    o.require(std::abs(ci.mean - 2.5) <= 1e-6 && std::abs(ci.stddev - 1.290994) <= 1e-6 &&
                  std::abs(ci.lower - 1.234826) <= 1e-6 && std::abs(ci.upper - 3.765174) <= 1e-6,
              "[1,2,3,4] interval mismatch");
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x;
        const std::size_t n = 2 + rng.below(60);
        for (std::size_t i = 0; i < n; ++i) x.push_back(rng.uniform(-5, 5));
        const auto got = confidence_interval(x);
        const auto ref = oracle::textbook_ci(x);
        close(got.mean, ref.mean, "CI mean");
        close(got.stddev, ref.s, "CI s");
        close(got.lower, ref.lo, "CI lower");
        close(got.upper, ref.hi, "CI upper");
    }
    if (o.pass) o.detail = "200 snapshots + 100 sample sets, worst abs error " + format_double(worst);
    return o;
}

// 7 -------------------------------------------------------------------------
Outcome no_capacity_violations()
{
    Outcome o;
    Rng pick(31337);
    const std::vector<std::string> policies = {"roundrobin", "random", "firstfit", "lif", "mu", "mc", "rs"};
    const std::vector<PowerSchemeKind> kinds = {PowerSchemeKind::npa, PowerSchemeKind::linear, PowerSchemeKind::dvfs,
                                                PowerSchemeKind::dns_dvfs};
    std::size_t migrated = 0, rejected = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Scenario s;
        s.pm_fleet = {{1, 1 + static_cast<int>(pick.below(10))},
                      {2, static_cast<int>(pick.below(5))},
                      {3, static_cast<int>(pick.below(5))}};
        auto w = generated(100 + static_cast<std::int64_t>(pick.below(900)), pick.uniform(0.5, 5), pick.uniform(5, 50),
                           200, s.catalog);
        if (pick.below(2)) w.capacity_range = std::pair{0.0, pick.uniform(0.1, 1.0)};
        s.workload = w;
        s.policy.name = policies[pick.below(policies.size())];
        s.power.kind = kinds[pick.below(kinds.size())];
        if (pick.below(2)) s.migration_interval = pick.uniform(1, 10);
        s.slot_length = pick.uniform(0.5, 5);
        const auto r = run_simulation(s, static_cast<std::uint64_t>(trial));
        const auto violations = capacity_violations(r);
        o.require(violations.empty(), "scenario " + std::to_string(trial) + " (" + s.policy.name + "): " +
                                          std::to_string(violations.size()) + " violations");
        o.require(testing::peak_segment_usage(r) <= 1 + capacity_tolerance,
                  "scenario " + std::to_string(trial) + ": segment sweep exceeds capacity");
        migrated += r.migration_count;
        rejected += r.rejected.size();
    }
    o.require(migrated > 0, "no scenario exercised migration");
    if (o.pass)
        o.detail = "50 scenarios, " + std::to_string(migrated) + " migrations, " + std::to_string(rejected) + " rejections, 0 violations";
    return o;
}

// 8 -------------------------------------------------------------------------
Outcome runs_are_deterministic()
{
    Outcome o;
    ScenarioFile file;
    Scenario& s = file.scenario;
    s.pm_fleet = {{1, 10}, {2, 10}, {3, 10}};
    s.workload = generated(600, 3, 40, 200, s.catalog);
    s.migration_interval = 5.0;
    s.record_events = true;
    std::size_t compared = 0;
    for (const char* policy : {"random", "mc", "lif", "roundrobin"}) {
        s.policy.name = policy;
        s.power.kind = std::string(policy) == "lif" ? PowerSchemeKind::linear : PowerSchemeKind::dns_dvfs;
        const auto serial = run_repetitions(file, 8, 100, 1, true);
        const auto parallel = run_repetitions(file, 8, 100, 8, true);
        for (std::size_t i = 0; i < serial.size(); ++i) {
            const auto again = run_simulation(s, serial[i].report.seed);
            const std::string a = to_json(*serial[i].result).dump();
            o.require(a == to_json(*parallel[i].result).dump(), std::string(policy) + ": result differs across job counts");
            o.require(a == to_json(again).dump(), std::string(policy) + ": result differs between identical runs");
            o.require(write_event_log(serial[i].result->event_log) == write_event_log(parallel[i].result->event_log),
                      std::string(policy) + ": event log differs");
            o.require(to_json(serial[i].report).dump() == to_json(parallel[i].report).dump(),
                      std::string(policy) + ": report differs across job counts");
            o.require(to_json(serial[i].report).dump() == to_json(summarize(again, s.power)).dump(),
                      std::string(policy) + ": report differs between identical runs");
            ++compared;
        }
        std::vector<MetricReport> a, b;
        for (const auto& x : serial) a.push_back(x.report);
        for (const auto& x : parallel) b.push_back(x.report);
        o.require(reports_csv(a) == reports_csv(b), std::string(policy) + ": per-run CSV differs");
    }
    if (o.pass) o.detail = std::to_string(compared) + " runs byte-identical at 1 and 8 jobs and on rerun";
    return o;
}

// 9 -------------------------------------------------------------------------
Outcome scales_to_half_a_million()
{
    Outcome o;
    const BenchRow row = bench_one(500000, 500);
    o.require(row.wall_s < 60, "wall time " + format_double(row.wall_s) + " s");
    o.require(row.peak_rss_mb > 0 && row.peak_rss_mb < 1024, "peak memory " + format_double(row.peak_rss_mb) + " MB");
    std::ostringstream d;
    d << "500000 requests on 500 PMs: " << format_double(std::round(row.wall_s * 100) / 100) << " s, "
      << format_double(std::round(row.peak_rss_mb * 10) / 10) << " MB peak RSS, " << format_double(row.accepted)
      << " accepted";
    o.detail = o.pass ? d.str() : o.detail + "; " + d.str();
    return o;
}

}  // namespace

int main()
{
    struct Criterion {
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {"idle power equals catalog p_min", idle_power_matches_catalog},
        {"LIF lowest datacenter imbalance (100 PMs, 250-1500 requests)", lif_has_lowest_imbalance},
        {"DNS+DVFS vs DVFS energy grid (100-400 servers, load 0-1)", sleep_saves_energy},
        {"migrations only when they save power; none under NPA/DVFS", migrations_only_when_they_save_power},
        {"energy integral vs fine quadrature", energy_matches_quadrature},
        {"imbalance and interval metrics vs loop oracles", metrics_match_oracles},
        {"capacity safety over 50 random scenarios", no_capacity_violations},
        {"determinism across reruns and job counts", runs_are_deterministic},
        {"500k requests on 500 PMs within 60 s and 1 GB", scales_to_half_a_million},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].check();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        failed += !out.pass;
        std::printf("[%s] %zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
