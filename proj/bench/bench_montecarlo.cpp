// Serial reference against the OpenMP estimator on one critical
// configuration. Also checks the two agree bit for bit.
//
//   bench_montecarlo [n] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "resetruin/critical.hpp"
#include "resetruin/montecarlo.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace resetruin;

int main(int argc, char** argv) {
    const std::int64_t n = argc > 1 ? std::atoll(argv[1]) : 200000;
    SimulationOptions opt;
    opt.threads = argc > 2 ? std::atoi(argv[2]) : 0;

    const WalkSpec walk = validate_walk(10, 0.6);
    const ResetSpec pi = critical_family(walk, std::vector<int>{3, 7}).materialize();

    using Clock = std::chrono::steady_clock;
    auto t0 = Clock::now();
    const auto serial = estimate_serial(walk, pi, 0.5, n, 42);
    const double t_serial = std::chrono::duration<double>(Clock::now() - t0).count();

    t0 = Clock::now();
    const auto parallel = estimate(walk, pi, 0.5, n, 42, std::nullopt, opt);
    const double t_parallel = std::chrono::duration<double>(Clock::now() - t0).count();

    int threads = 1;
#ifdef _OPENMP
    threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#endif
    const double trajectories = static_cast<double>(n) * static_cast<double>(pi.size());
    std::printf("n per site  %lld\n", static_cast<long long>(n));
    std::printf("serial      %.3f s  (%.3g traj/s)\n", t_serial, trajectories / t_serial);
    std::printf("openmp x%-3d %.3f s  (%.3g traj/s)  speedup %.2f\n", threads, t_parallel,
                trajectories / t_parallel, t_serial / t_parallel);
    std::printf("C_hat       %.12f / %.12f  %s\n", serial.C_hat, parallel.C_hat,
                serial.C_hat == parallel.C_hat ? "identical" : "MISMATCH");
    return serial.C_hat == parallel.C_hat ? 0 : 1;
}
