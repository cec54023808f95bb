#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "resetruin/core.hpp"
#include "resetruin/rng.hpp"

namespace resetruin {

inline constexpr std::int64_t kDefaultStepCap = 100'000'000;

enum class Absorption { ruin, escape };

struct TrajectoryOutcome {
    Absorption absorbed_at = Absorption::ruin;
    std::int64_t steps = 0;   ///< time index at absorption, resets included
    std::int64_t resets = 0;
};

struct SimulationOptions {
    std::int64_t step_cap = kDefaultStepCap;
    int threads = 0;  ///< 0 leaves the OpenMP default
};

struct SiteTally {
    int site = 0;
    std::int64_t ruins = 0;
    std::int64_t escapes = 0;
    std::int64_t steps = 0;
    std::int64_t resets = 0;
};

struct McEstimate {
    std::map<int, double> q_hat;  ///< empirical ruin frequency per reset site
    double C_hat = 0.0;
    std::int64_t n = 0;           ///< trajectories per site
    std::uint64_t seed = 0;
    double std_error = 0.0;
    std::vector<SiteTally> tallies;
};

/// Cumulative reset weights for inverse-CDF site draws.
class ResetSampler {
public:
    explicit ResetSampler(const ResetSpec& reset);
    int draw(double uniform) const;

private:
    std::vector<int> sites_;
    std::vector<double> cumulative_;
};

/// One trajectory of the reset dynamics from z0 until absorption. Each time
/// step draws the reset indicator first; a reset relocates to a pi-draw, a
/// non-reset moves +-1 and may absorb.
TrajectoryOutcome simulate_trajectory(const WalkSpec& walk, const ResetSampler& sampler, double gamma,
                                      int z0, TrajectoryStream& stream,
                                      std::int64_t step_cap = kDefaultStepCap);

TrajectoryOutcome simulate_trajectory(const WalkSpec& walk, const ResetSpec& reset, double gamma,
                                      int z0, TrajectoryStream& stream,
                                      std::int64_t step_cap = kDefaultStepCap);

/// n trajectories from every reset site, spread over OpenMP threads. The
/// result depends only on the arguments, never on the thread count.
McEstimate estimate(const WalkSpec& walk, const ResetSpec& reset, double gamma, std::int64_t n,
                    std::uint64_t seed, std::optional<double> c_star_ref = std::nullopt,
                    const SimulationOptions& options = {});

/// Single-threaded reference for estimate(); same streams, same result.
McEstimate estimate_serial(const WalkSpec& walk, const ResetSpec& reset, double gamma,
                           std::int64_t n, std::uint64_t seed,
                           std::optional<double> c_star_ref = std::nullopt,
                           const SimulationOptions& options = {});

/// Sum over entries of ((C_hat - C_th) / std_error)^2.
double chi_square(std::span<const std::pair<McEstimate, double>> entries);

}  // namespace resetruin
