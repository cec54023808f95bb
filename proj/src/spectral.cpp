#include "resetruin/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace resetruin {
namespace {

// Largest |exponent| handed to exp() when tabulating Doob factors.
constexpr double kMaxDoobExponent = 700.0;

void check_mode(const SpectralDecomposition& d, int nu) {
    if (nu < 1 || nu > d.modes()) {
        throw DomainError("mode index " + std::to_string(nu) + " outside [1," +
                          std::to_string(d.modes()) + "]");
    }
}

void check_interior(const SpectralDecomposition& d, int z) {
    if (z < 1 || z > d.walk.a - 1) {
        throw DomainError("site " + std::to_string(z) + " is not interior");
    }
}

void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw DomainError("resetting rate gamma must lie in (0,1)");
    }
}

}  // namespace

SpectralDecomposition decompose(const WalkSpec& walk) {
    if (walk.a > kMaxSpectralDomain) {
        throw RangeError("spectral tables are limited to a <= " +
                         std::to_string(kMaxSpectralDomain));
    }
    const double lr = walk.log_ratio();
    if (0.5 * walk.a * std::abs(lr) > kMaxDoobExponent) {
        throw RangeError("Doob factors overflow for this bias and domain size");
    }

    const int a = walk.a;
    const int n = a - 1;
    const double pi = std::numbers::pi;
    const double two_over_a = 2.0 / a;
    const double root_pq = std::sqrt(walk.p * walk.q);

    SpectralDecomposition d;
    d.walk = walk;
    d.lambdas.resize(n);
    d.h.resize(n);
    d.psi.resize(n, n);
    d.A.resize(n, n);
    d.B.resize(n, n);

    const double norm = std::sqrt(two_over_a);
    for (int x = 1; x <= n; ++x) {
        d.h[x - 1] = std::exp(0.5 * x * lr);
    }
    for (int nu = 1; nu <= n; ++nu) {
        d.lambdas[nu - 1] = 2.0 * root_pq * std::cos(pi * nu / a);
        const double edge = std::sin(pi * nu / a);
        for (int z = 1; z <= n; ++z) {
            d.psi(nu - 1, z - 1) = norm * std::sin(pi * nu * z / a);
            d.A(nu - 1, z - 1) =
                two_over_a * std::exp(0.5 * z * lr) * std::sin(pi * nu * z / a) * edge;
            d.B(nu - 1, z - 1) = two_over_a * std::exp(-0.5 * (a - z) * lr) *
                                 std::sin(pi * nu * (a - z) / a) * edge;
        }
    }
    return d;
}

double transfer(const SpectralDecomposition& decomp, int nu, double gamma) {
    check_mode(decomp, nu);
    check_gamma(gamma);
    const double damped = decomp.lambda(nu) * (1.0 - gamma);
    return damped / (1.0 - damped);
}

double mode_kernel(const SpectralDecomposition& decomp, int nu, double gamma) {
    check_mode(decomp, nu);
    check_gamma(gamma);
    const double keep = 1.0 - gamma;
    return std::sqrt(decomp.walk.p * decomp.walk.q) * keep / (1.0 - decomp.lambda(nu) * keep);
}

double spectral_u(const SpectralDecomposition& decomp, int z, double gamma) {
    check_interior(decomp, z);
    double sum = 0.0;
    for (int nu = 1; nu <= decomp.modes(); ++nu) {
        sum += decomp.A_at(nu, z) * mode_kernel(decomp, nu, gamma);
    }
    return sum;
}

double spectral_s(const SpectralDecomposition& decomp, int z, double gamma) {
    check_interior(decomp, z);
    double sum = 0.0;
    for (int nu = 1; nu <= decomp.modes(); ++nu) {
        sum += (decomp.A_at(nu, z) + decomp.B_at(nu, z)) * mode_kernel(decomp, nu, gamma);
    }
    return sum;
}

double duality_residual(const SpectralDecomposition& decomp, int z) {
    check_interior(decomp, z);
    const int a = decomp.walk.a;
    const double kappa = std::exp(-(a - z) * decomp.walk.log_ratio());
    double worst = 0.0;
    for (int nu = 1; nu <= decomp.modes(); ++nu) {
        worst = std::max(worst, std::abs(decomp.B_at(nu, z) - kappa * decomp.A_at(nu, a - z)));
    }
    return worst;
}

Eigen::MatrixXd site_columns(const Eigen::MatrixXd& coeffs, std::span<const int> sites) {
    Eigen::MatrixXd out(coeffs.rows(), static_cast<Eigen::Index>(sites.size()));
    for (std::size_t i = 0; i < sites.size(); ++i) {
        out.col(static_cast<Eigen::Index>(i)) = coeffs.col(sites[i] - 1);
    }
    return out;
}

bool rank_check(const SpectralDecomposition& decomp, std::span<const int> sites) {
    if (sites.empty() || static_cast<int>(sites.size()) > decomp.modes()) {
        throw DomainError("rank check needs between 1 and a-1 sites");
    }
    std::set<int> seen;
    for (int z : sites) {
        check_interior(decomp, z);
        if (!seen.insert(z).second) {
            throw DomainError("duplicate site " + std::to_string(z));
        }
    }
    const Eigen::MatrixXd cols = site_columns(decomp.A, sites);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols);
    const auto& sv = svd.singularValues();
    const double cutoff = sv(0) * static_cast<double>(sites.size()) * 1e-12;
    const auto rank = (sv.array() > cutoff).count();
    return rank == static_cast<Eigen::Index>(sites.size());
}

}  // namespace resetruin
