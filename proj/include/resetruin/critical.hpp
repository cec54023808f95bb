#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "resetruin/core.hpp"

namespace resetruin {

/// Default relative spread allowed when testing B_nu(z) / A_nu(z') for
/// constancy across modes.
inline constexpr double kDualityTolerance = 1e-9;

/// Relative tolerance for the pair-product (H3) and neutral-site (H4) checks.
inline constexpr double kProductTolerance = 1e-10;

/**
 * Involution sigma on reset sites with mode-independent weights kappa such
 * that B_nu(z) = kappa(z) A_nu(sigma(z)) for every mode.
 */
struct DualityCertificate {
    std::vector<std::pair<int, int>> pairing;  ///< (z, sigma(z)) for every site
    std::map<int, double> kappa;
    double K = 0.0;  ///< common pair product kappa(z) kappa(sigma(z))
    std::vector<int> neutral_sites;
    bool h3_ok = false;
    bool h4_ok = false;

    int partner(int z) const;
};

/**
 * Search for a spectral duality on arbitrary coefficient tables.
 *
 * A and B have one row per mode and one column per entry of `sites`. A
 * candidate partner z' for z is accepted when the ratios B(., z) / A(., z')
 * agree to relative spread `tol` over modes with |A(nu, z')| > tol * max|A|,
 * and B(., z) is negligible on the skipped modes. Returns the first full
 * involutive pairing found, or nothing.
 */
std::optional<DualityCertificate> detect_duality(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                                 std::span<const int> sites,
                                                 double tol = kDualityTolerance);

struct SymmetricPartition {
    std::vector<std::pair<int, int>> pairs;  ///< (z, a-z) with z < a/2
    std::optional<int> neutral;             ///< a/2, even a only
};

/// Partition into {z, a-z} pairs plus the midpoint, if the set is closed
/// under reflection.
std::optional<SymmetricPartition> check_symmetry(const WalkSpec& walk, std::span<const int> sites);

/// Reset-neutral coupling value (q/p)^{a/2} / (1 + (q/p)^{a/2}).
double invariant_constant(const WalkSpec& walk);

/**
 * Family of reset distributions whose coupling constant does not depend on
 * the resetting rate.
 */
class CriticalFamily {
public:
    CriticalFamily(WalkSpec walk, SymmetricPartition partition);

    const WalkSpec& walk() const { return walk_; }
    const std::vector<int>& sites() const { return sites_; }
    const std::vector<std::pair<int, int>>& pairs() const { return partition_.pairs; }
    /// pi*(z) / pi*(a-z) for each pair, in pair order.
    const std::vector<double>& pair_ratios() const { return ratios_; }
    std::optional<int> neutral_site() const { return partition_.neutral; }
    double C_star() const { return c_star_; }
    const DualityCertificate& certificate() const { return certificate_; }

    /// Mass 1 - neutral_weight split equally across pairs, then within each
    /// pair by its ratio; neutral_weight on the midpoint. Without pairs the
    /// midpoint carries all the mass.
    ResetSpec materialize(double neutral_weight = 0.0) const;

    /// As above with an explicit mass per pair (summing to 1 - neutral_weight).
    ResetSpec materialize(double neutral_weight, std::span<const double> pair_mass) const;

private:
    WalkSpec walk_;
    SymmetricPartition partition_;
    std::vector<int> sites_;
    std::vector<double> ratios_;
    DualityCertificate certificate_;
    double c_star_ = 0.0;
};

/// Throws SymmetryError if the sites are not reflection-closed.
CriticalFamily critical_family(const WalkSpec& walk, std::span<const int> sites);

/// max - min of C(pi, gamma) over the grid.
double flatness_score(const WalkSpec& walk, const ResetSpec& reset, std::span<const double> gamma_grid);

}  // namespace resetruin
