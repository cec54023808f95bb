#include "resetruin/critical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "resetruin/exact.hpp"

namespace resetruin {
namespace {

bool relatively_equal(double x, double y, double tol) {
    return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
}

// kappa such that B(., i) = kappa * A(., j) across modes, if one exists.
std::optional<double> proportionality(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                      Eigen::Index i, Eigen::Index j, double a_floor, double tol) {
    const double b_scale = B.col(i).cwiseAbs().maxCoeff();
    if (b_scale == 0.0) {
        return std::nullopt;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    int used = 0;
    for (Eigen::Index nu = 0; nu < A.rows(); ++nu) {
        const double denom = A(nu, j);
        if (std::abs(denom) <= a_floor) {
            if (std::abs(B(nu, i)) > tol * b_scale) {
                return std::nullopt;
            }
            continue;
        }
        const double ratio = B(nu, i) / denom;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        sum += ratio;
        ++used;
    }
    if (used == 0) {
        return std::nullopt;
    }
    const double kappa = sum / used;
    if (!(kappa > 0.0)) {
        return std::nullopt;
    }
    if (hi - lo > tol * std::max(std::abs(lo), std::abs(hi))) {
        return std::nullopt;
    }
    return kappa;
}

}  // namespace

int DualityCertificate::partner(int z) const {
    for (const auto& [site, other] : pairing) {
        if (site == z) {
            return other;
        }
    }
    throw DomainError("site " + std::to_string(z) + " is not covered by the certificate");
}

std::optional<DualityCertificate> detect_duality(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                                 std::span<const int> sites, double tol) {
    const auto m = static_cast<Eigen::Index>(sites.size());
    if (A.rows() != B.rows() || A.cols() != B.cols() || A.cols() != m) {
        throw DomainError("coefficient tables must share shape modes x sites");
    }
    if (A.rows() < 1 || m < 1) {
        throw DomainError("need at least one mode and one site");
    }
    if (std::set<int>(sites.begin(), sites.end()).size() != sites.size()) {
        throw DomainError("sites must be distinct");
    }

    const double a_floor = tol * A.cwiseAbs().maxCoeff();
    // candidates[i][j] holds kappa(z_i) when z_j is an admissible partner.
    std::vector<std::vector<std::optional<double>>> candidates(
        m, std::vector<std::optional<double>>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            candidates[i][j] = proportionality(A, B, i, j, a_floor, tol);
        }
    }

    std::vector<Eigen::Index> sigma(m, -1);
    std::function<bool()> assign = [&]() -> bool {
        const auto it = std::find(sigma.begin(), sigma.end(), -1);
        if (it == sigma.end()) {
            return true;
        }
        const auto i = static_cast<Eigen::Index>(it - sigma.begin());
        for (Eigen::Index j = 0; j < m; ++j) {
            if (sigma[j] != -1 || !candidates[i][j] || !candidates[j][i]) {
                continue;
            }
            sigma[i] = j;
            sigma[j] = i;
            if (assign()) {
                return true;
            }
            sigma[i] = -1;
            sigma[j] = -1;
        }
        return false;
    };
    if (!assign()) {
        return std::nullopt;
    }

    DualityCertificate cert;
    std::vector<double> products;
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index j = sigma[i];
        const double k = *candidates[i][j];
        cert.pairing.emplace_back(sites[i], sites[j]);
        cert.kappa[sites[i]] = k;
        if (i == j) {
            cert.neutral_sites.push_back(sites[i]);
        } else if (i < j) {
            products.push_back(k * *candidates[j][i]);
        }
    }

    if (!products.empty()) {
        const auto [lo, hi] = std::minmax_element(products.begin(), products.end());
        cert.h3_ok = relatively_equal(*lo, *hi, kProductTolerance);
        cert.K = std::accumulate(products.begin(), products.end(), 0.0) /
                 static_cast<double>(products.size());
    } else {
        cert.h3_ok = true;
        const double k0 = cert.kappa.at(cert.neutral_sites.front());
        cert.K = k0 * k0;
    }
    const double root_K = std::sqrt(cert.K);
    cert.h4_ok = std::all_of(cert.neutral_sites.begin(), cert.neutral_sites.end(), [&](int z) {
        return relatively_equal(cert.kappa.at(z), root_K, kProductTolerance);
    });
    return cert;
}

std::optional<SymmetricPartition> check_symmetry(const WalkSpec& walk, std::span<const int> sites) {
    const std::set<int> set(sites.begin(), sites.end());
    SymmetricPartition out;
    for (int z : set) {
        const int mirror = walk.a - z;
        if (!set.contains(mirror)) {
            return std::nullopt;
        }
        if (2 * z == walk.a) {
            out.neutral = z;
        } else if (z < mirror) {
            out.pairs.emplace_back(z, mirror);
        }
    }
    return out;
}

double invariant_constant(const WalkSpec& walk) {
    // (q/p)^{a/2} / (1 + (q/p)^{a/2}) written as a logistic in ln(q/p).
    return 1.0 / (1.0 + std::exp(-0.5 * walk.a * walk.log_ratio()));
}

CriticalFamily::CriticalFamily(WalkSpec walk, SymmetricPartition partition)
    : walk_(walk), partition_(std::move(partition)) {
    const double lr = walk_.log_ratio();
    // ln kappa(z) = (a - z) ln(p/q) for the walk.
    auto log_kappa = [&](int z) { return -(walk_.a - z) * lr; };

    for (const auto& [z, mirror] : partition_.pairs) {
        sites_.push_back(z);
        sites_.push_back(mirror);
        ratios_.push_back(std::exp(0.5 * (log_kappa(mirror) - log_kappa(z))));
        certificate_.pairing.emplace_back(z, mirror);
        certificate_.pairing.emplace_back(mirror, z);
        certificate_.kappa[z] = std::exp(log_kappa(z));
        certificate_.kappa[mirror] = std::exp(log_kappa(mirror));
    }
    if (partition_.neutral) {
        const int z0 = *partition_.neutral;
        sites_.push_back(z0);
        certificate_.pairing.emplace_back(z0, z0);
        certificate_.kappa[z0] = std::exp(log_kappa(z0));
        certificate_.neutral_sites.push_back(z0);
    }
    std::sort(sites_.begin(), sites_.end());

    const double log_K = -walk_.a * lr;
    certificate_.K = std::exp(log_K);
    certificate_.h3_ok = true;
    certificate_.h4_ok = true;
    c_star_ = 1.0 / (1.0 + std::exp(0.5 * log_K));
}

ResetSpec CriticalFamily::materialize(double neutral_weight) const {
    const std::size_t n = partition_.pairs.size();
    std::vector<double> mass(n, n == 0 ? 0.0 : (1.0 - neutral_weight) / static_cast<double>(n));
    return materialize(neutral_weight, mass);
}

ResetSpec CriticalFamily::materialize(double neutral_weight, std::span<const double> pair_mass) const {
    if (!(neutral_weight >= 0.0 && neutral_weight < 1.0)) {
        throw DomainError("neutral weight must lie in [0,1)");
    }
    if (neutral_weight > 0.0 && !partition_.neutral) {
        throw DomainError("neutral weight given but the site set has no neutral site");
    }
    if (pair_mass.size() != partition_.pairs.size()) {
        throw DomainError("need one mass per pair");
    }

    std::vector<int> sites;
    std::vector<double> weights;
    if (partition_.pairs.empty()) {
        sites.push_back(*partition_.neutral);
        weights.push_back(1.0);
        return validate_reset(walk_, sites, weights);
    }

    double total = neutral_weight;
    for (std::size_t k = 0; k < partition_.pairs.size(); ++k) {
        const double mass = pair_mass[k];
        if (!(mass >= 0.0)) {
            throw DomainError("pair masses must be non-negative");
        }
        const double ratio = ratios_[k];
        const auto [z, mirror] = partition_.pairs[k];
        sites.push_back(z);
        weights.push_back(mass * ratio / (1.0 + ratio));
        sites.push_back(mirror);
        weights.push_back(mass / (1.0 + ratio));
        total += mass;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
        throw DomainError("pair masses and neutral weight must sum to 1");
    }
    if (partition_.neutral) {
        sites.push_back(*partition_.neutral);
        weights.push_back(neutral_weight);
    }
    return validate_reset(walk_, sites, weights);
}

CriticalFamily critical_family(const WalkSpec& walk, std::span<const int> sites) {
    for (int z : sites) {
        if (z < 1 || z > walk.a - 1) {
            throw DomainError("site " + std::to_string(z) + " is not interior");
        }
    }
    if (std::set<int>(sites.begin(), sites.end()).size() != sites.size() || sites.empty()) {
        throw DomainError("sites must be distinct and non-empty");
    }
    auto partition = check_symmetry(walk, sites);
    if (!partition) {
        throw SymmetryError("reset sites are not closed under z -> a - z");
    }
    return CriticalFamily(walk, std::move(*partition));
}

double flatness_score(const WalkSpec& walk, const ResetSpec& reset, std::span<const double> gamma_grid) {
    if (gamma_grid.size() < 2) {
        throw DomainError("flatness needs at least two grid points");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double gamma : gamma_grid) {
        const double C = coupling_constant(walk, reset, gamma).C;
        lo = std::min(lo, C);
        hi = std::max(hi, C);
    }
    return hi - lo;
}

}  // namespace resetruin
