#pragma once

#include <span>
#include <vector>

#include "resetruin/errors.hpp"

namespace resetruin {

/// |p - 1/2| below this is treated as the unbiased walk.
inline constexpr double kUnbiasedThreshold = 1e-12;

/// Tolerance on the sum of reset weights before renormalization.
inline constexpr double kWeightSumTolerance = 1e-12;

/**
 * Nearest-neighbour walk on {0, ..., a} absorbed at both ends.
 *
 * Construct through validate_walk(); a default-constructed value is not a
 * valid walk.
 */
struct WalkSpec {
    int a = 0;
    double p = 0.0;  ///< up-step probability
    double q = 0.0;  ///< down-step probability, 1 - p

    bool unbiased() const;
    /// ln(q/p); zero for the unbiased walk.
    double log_ratio() const;
};

/**
 * Reset distribution over interior sites.
 *
 * Sites are strictly increasing and lie in [1, a-1]. Weights are
 * non-negative and renormalized to sum to one.
 */
struct ResetSpec {
    std::vector<int> sites;
    std::vector<double> weights;

    std::size_t size() const { return sites.size(); }
};

WalkSpec validate_walk(int a, double p);

/// Sorts (site, weight) pairs by site. Throws DomainError on out-of-range or
/// duplicate sites, negative weights, or a weight sum off by more than 1e-12.
ResetSpec validate_reset(const WalkSpec& walk, std::span<const int> sites,
                         std::span<const double> weights);

/// Classical ruin probability without resetting from a (possibly
/// half-integer) starting point z in [0, a].
double classical_ruin(const WalkSpec& walk, double z);

}  // namespace resetruin
