#include "resetruin/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace resetruin {

bool WalkSpec::unbiased() const { return std::abs(p - 0.5) < kUnbiasedThreshold; }

double WalkSpec::log_ratio() const { return unbiased() ? 0.0 : std::log(q / p); }

WalkSpec validate_walk(int a, double p) {
    if (a < 2) {
        throw DomainError("domain size a must be >= 2, got " + std::to_string(a));
    }
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << "up-step probability p must lie in (0,1), got " << p;
        throw DomainError(msg.str());
    }
    return WalkSpec{a, p, 1.0 - p};
}

ResetSpec validate_reset(const WalkSpec& walk, std::span<const int> sites,
                         std::span<const double> weights) {
    if (sites.empty()) {
        throw DomainError("reset distribution needs at least one site");
    }
    if (sites.size() != weights.size()) {
        throw DomainError("sites and weights differ in length");
    }

    std::vector<std::size_t> order(sites.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return sites[i] < sites[j]; });

    ResetSpec reset;
    reset.sites.reserve(sites.size());
    reset.weights.reserve(sites.size());
    double total = 0.0;
    for (std::size_t k : order) {
        const int z = sites[k];
        const double w = weights[k];
        if (z < 1 || z > walk.a - 1) {
            throw DomainError("reset site " + std::to_string(z) + " is not interior to [0," +
                              std::to_string(walk.a) + "]");
        }
        if (!reset.sites.empty() && reset.sites.back() == z) {
            throw DomainError("duplicate reset site " + std::to_string(z));
        }
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw DomainError("reset weights must be finite and non-negative");
        }
        reset.sites.push_back(z);
        reset.weights.push_back(w);
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "reset weights sum to " << total << ", expected 1";
        throw DomainError(msg.str());
    }
    for (double& w : reset.weights) {
        w /= total;
    }
    return reset;
}

double classical_ruin(const WalkSpec& walk, double z) {
    const double a = walk.a;
    if (!(z >= 0.0 && z <= a)) {
        throw DomainError("starting point must lie in [0,a]");
    }
    if (walk.unbiased()) {
        return 1.0 - z / a;
    }
    // (r^z - r^a) / (1 - r^a) with r = q/p, rearranged so that neither
    // branch forms r^a when it could overflow and expm1 absorbs the
    // cancellation close to p = 1/2.
    const double lr = walk.log_ratio();
    if (lr > 0.0) {
        return std::expm1(-(a - z) * lr) / std::expm1(-a * lr);
    }
    return std::exp(z * lr) * std::expm1((a - z) * lr) / std::expm1(a * lr);
}

}  // namespace resetruin
