#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "resetruin/core.hpp"

namespace resetruin {

/// Largest domain the closed-form tables are built for.
inline constexpr int kMaxSpectralDomain = 64;

/**
 * Closed-form eigen-structure of the symmetrized walk on {1, ..., a-1}.
 *
 * Mode index nu and site index z are 1-based in the accessors; the
 * underlying Eigen storage is 0-based with rows = modes, columns = sites.
 */
struct SpectralDecomposition {
    WalkSpec walk;
    std::vector<double> lambdas;  ///< lambda_nu, strictly decreasing in nu
    std::vector<double> h;        ///< Doob weight (q/p)^{x/2}
    Eigen::MatrixXd psi;          ///< orthonormal sine modes
    Eigen::MatrixXd A;            ///< ruin-channel coefficients
    Eigen::MatrixXd B;            ///< escape-channel coefficients

    int modes() const { return walk.a - 1; }
    double lambda(int nu) const { return lambdas[nu - 1]; }
    double A_at(int nu, int z) const { return A(nu - 1, z - 1); }
    double B_at(int nu, int z) const { return B(nu - 1, z - 1); }
};

/// Throws RangeError when a exceeds kMaxSpectralDomain or the Doob factors
/// would leave double range.
SpectralDecomposition decompose(const WalkSpec& walk);

/// f_nu(gamma) = lambda_nu (1-gamma) / (1 - lambda_nu (1-gamma)).
double transfer(const SpectralDecomposition& decomp, int nu, double gamma);

/**
 * Weight multiplying A_nu(z) (resp. A_nu + B_nu) in the mode expansion of
 * u (resp. s): sqrt(pq) (1-gamma) / (1 - lambda_nu (1-gamma)), which equals
 * sqrt(pq) (1-gamma) (1 + f_nu). Finite at lambda_nu = 0.
 */
double mode_kernel(const SpectralDecomposition& decomp, int nu, double gamma);

double spectral_u(const SpectralDecomposition& decomp, int z, double gamma);
double spectral_s(const SpectralDecomposition& decomp, int z, double gamma);

/// max over nu of |B_nu(z) - (p/q)^{a-z} A_nu(a-z)|.
double duality_residual(const SpectralDecomposition& decomp, int z);

/// Numerical full-column-rank test of [A_nu(z_i)]. Singular values below
/// sigma_max * |sites| * 1e-12 count as zero.
bool rank_check(const SpectralDecomposition& decomp, std::span<const int> sites);

/// Columns of A and B restricted to the given sites, in the given order.
Eigen::MatrixXd site_columns(const Eigen::MatrixXd& coeffs, std::span<const int> sites);

}  // namespace resetruin
