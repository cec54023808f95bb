#include "resetruin/montecarlo.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace resetruin {
namespace {

void check_common(const WalkSpec& walk, const ResetSpec& reset, double gamma, std::int64_t n) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw DomainError("resetting rate gamma must lie in (0,1)");
    }
    if (n < 1) {
        throw DomainError("need at least one trajectory per site");
    }
    for (int z : reset.sites) {
        if (z < 1 || z > walk.a - 1) {
            throw DomainError("reset site " + std::to_string(z) + " is not interior");
        }
    }
}

McEstimate assemble(const ResetSpec& reset, std::vector<SiteTally> tallies, std::int64_t n,
                    std::uint64_t seed, std::optional<double> c_star_ref) {
    McEstimate est;
    est.n = n;
    est.seed = seed;
    for (std::size_t i = 0; i < reset.size(); ++i) {
        const double q = static_cast<double>(tallies[i].ruins) / static_cast<double>(n);
        est.q_hat[reset.sites[i]] = q;
        est.C_hat += reset.weights[i] * q;
    }
    est.C_hat = std::min(1.0, std::max(0.0, est.C_hat));
    const double c = c_star_ref.value_or(est.C_hat);
    est.std_error = std::sqrt(c * (1.0 - c) / static_cast<double>(n));
    est.tallies = std::move(tallies);
    return est;
}

void record(SiteTally& tally, const TrajectoryOutcome& out) {
    if (out.absorbed_at == Absorption::ruin) {
        ++tally.ruins;
    } else {
        ++tally.escapes;
    }
    tally.steps += out.steps;
    tally.resets += out.resets;
}

}  // namespace

ResetSampler::ResetSampler(const ResetSpec& reset) : sites_(reset.sites) {
    double acc = 0.0;
    cumulative_.reserve(reset.size());
    for (double w : reset.weights) {
        acc += w;
        cumulative_.push_back(acc);
    }
}

int ResetSampler::draw(double uniform) const {
    for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i) {
        if (uniform < cumulative_[i]) {
            return sites_[i];
        }
    }
    // Last site absorbs rounding in the final cumulative weight, but a
    // zero-weight tail must never be chosen.
    for (std::size_t i = cumulative_.size(); i-- > 0;) {
        if (i == 0 || cumulative_[i] > cumulative_[i - 1]) {
            return sites_[i];
        }
    }
    return sites_.back();
}

TrajectoryOutcome simulate_trajectory(const WalkSpec& walk, const ResetSampler& sampler, double gamma,
                                      int z0, TrajectoryStream& stream, std::int64_t step_cap) {
    if (z0 < 1 || z0 > walk.a - 1) {
        throw DomainError("trajectory must start at an interior site");
    }
    TrajectoryOutcome out;
    int x = z0;
    while (true) {
        if (out.steps >= step_cap) {
            throw IterationCapError("trajectory exceeded " + std::to_string(step_cap) + " steps");
        }
        ++out.steps;
        if (stream.uniform() < gamma) {
            x = sampler.draw(stream.uniform());
            ++out.resets;
            continue;
        }
        x += (stream.uniform() < walk.p) ? 1 : -1;
        if (x == 0) {
            out.absorbed_at = Absorption::ruin;
            return out;
        }
        if (x == walk.a) {
            out.absorbed_at = Absorption::escape;
            return out;
        }
    }
}

TrajectoryOutcome simulate_trajectory(const WalkSpec& walk, const ResetSpec& reset, double gamma,
                                      int z0, TrajectoryStream& stream, std::int64_t step_cap) {
    return simulate_trajectory(walk, ResetSampler(reset), gamma, z0, stream, step_cap);
}

McEstimate estimate_serial(const WalkSpec& walk, const ResetSpec& reset, double gamma,
                           std::int64_t n, std::uint64_t seed, std::optional<double> c_star_ref,
                           const SimulationOptions& options) {
    check_common(walk, reset, gamma, n);
    const ResetSampler sampler(reset);
    std::vector<SiteTally> tallies(reset.size());
    for (std::size_t i = 0; i < reset.size(); ++i) {
        tallies[i].site = reset.sites[i];
        for (std::int64_t t = 0; t < n; ++t) {
            TrajectoryStream stream(seed, i, static_cast<std::uint64_t>(t));
            record(tallies[i], simulate_trajectory(walk, sampler, gamma, reset.sites[i], stream,
                                                   options.step_cap));
        }
    }
    return assemble(reset, std::move(tallies), n, seed, c_star_ref);
}

McEstimate estimate(const WalkSpec& walk, const ResetSpec& reset, double gamma, std::int64_t n,
                    std::uint64_t seed, std::optional<double> c_star_ref,
                    const SimulationOptions& options) {
    check_common(walk, reset, gamma, n);
    const ResetSampler sampler(reset);
    std::vector<SiteTally> tallies(reset.size());

#ifdef _OPENMP
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#endif
    std::exception_ptr failure;
    std::mutex failure_mutex;

    for (std::size_t i = 0; i < reset.size(); ++i) {
        const int z0 = reset.sites[i];
        std::int64_t ruins = 0;
        std::int64_t escapes = 0;
        std::int64_t steps = 0;
        std::int64_t resets = 0;
        // Integer reductions are order-independent, so any thread count
        // reproduces the serial tallies exactly.
#pragma omp parallel for num_threads(threads) schedule(static) \
    reduction(+ : ruins, escapes, steps, resets)
        for (std::int64_t t = 0; t < n; ++t) {
            try {
                TrajectoryStream stream(seed, i, static_cast<std::uint64_t>(t));
                const auto out =
                    simulate_trajectory(walk, sampler, gamma, z0, stream, options.step_cap);
                if (out.absorbed_at == Absorption::ruin) {
                    ++ruins;
                } else {
                    ++escapes;
                }
                steps += out.steps;
                resets += out.resets;
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
        tallies[i] = SiteTally{z0, ruins, escapes, steps, resets};
    }
    return assemble(reset, std::move(tallies), n, seed, c_star_ref);
}

double chi_square(std::span<const std::pair<McEstimate, double>> entries) {
    if (entries.empty()) {
        throw DomainError("chi-square needs at least one entry");
    }
    double total = 0.0;
    for (const auto& [est, c_th] : entries) {
        if (!(est.std_error > 0.0)) {
            throw DomainError("chi-square entry has zero standard error");
        }
        const double z = (est.C_hat - c_th) / est.std_error;
        total += z * z;
    }
    return total;
}

}  // namespace resetruin
