#include <chrono>
#include <cstdio>

#include "dcsim/runner.hpp"

#if defined(__unix__) || defined(__APPLE__)
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>
#define DCSIM_HAVE_FORK 1
#endif

namespace dcsim {

Scenario bench_scenario(std::size_t requests, std::size_t pms, std::uint64_t seed)
{
    Scenario s;
    const int per_type = static_cast<int>(pms / 3);
    s.pm_fleet = {{1, per_type + static_cast<int>(pms % 3)}, {2, per_type}, {3, per_type}};
    WorkloadSpec spec;
    spec.count = static_cast<std::int64_t>(requests);
    spec.mean_duration = 100;
    spec.max_duration = 1000;
    spec.arrival_rate = 4.0 * static_cast<double>(pms) / spec.mean_duration;
    spec.type_mix = uniform_type_mix(s.catalog);
    s.workload = spec;
    s.policy.name = "lif";
    s.power.kind = PowerSchemeKind::linear;
    s.seed = seed;
    return s;
}

namespace {

struct Measured {
    double wall_s = 0;
    double accepted = 0;
};

Measured simulate_size(std::size_t requests, std::size_t pms)
{
    const auto started = std::chrono::steady_clock::now();
    const Scenario s = bench_scenario(requests, pms);
    const auto result = run_simulation(s);
    const auto report = summarize(result, s.power);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return {wall, report.accepted};
}

}  // namespace

BenchRow bench_one(std::size_t requests, std::size_t pms)
{
    BenchRow row{requests, pms, 0, 0, 0};
#ifdef DCSIM_HAVE_FORK
    int fds[2];
    if (pipe(fds) == 0) {
        std::fflush(nullptr);
        const pid_t pid = fork();
        if (pid == 0) {
            close(fds[0]);
            Measured m{};
            int code = 0;
            try {
                m = simulate_size(requests, pms);
            } catch (...) {
                code = 1;
            }
            [[maybe_unused]] auto n = write(fds[1], &m, sizeof m);
            close(fds[1]);
            _exit(code);
        }
        if (pid > 0) {
            close(fds[1]);
            Measured m{};
            const bool got = read(fds[0], &m, sizeof m) == static_cast<ssize_t>(sizeof m);
            close(fds[0]);
            int status = 0;
            struct rusage usage {};
            wait4(pid, &status, 0, &usage);
            if (!got || !WIFEXITED(status) || WEXITSTATUS(status) != 0) throw std::runtime_error("bench child failed");
            row.wall_s = m.wall_s;
            row.accepted = m.accepted;
#ifdef __APPLE__
            row.peak_rss_mb = static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);
#else
            row.peak_rss_mb = static_cast<double>(usage.ru_maxrss) / 1024.0;
#endif
            return row;
        }
        close(fds[0]);
        close(fds[1]);
    }
#endif
    const auto m = simulate_size(requests, pms);
    row.wall_s = m.wall_s;
    row.accepted = m.accepted;
    return row;
}

}  // namespace dcsim
