#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "resetruin/exact.hpp"
#include "resetruin/spectral.hpp"

using namespace resetruin;

namespace {

std::vector<double> gamma_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 19; ++k) g.push_back(0.05 * k);
    return g;
}

// First-passage probabilities P_z(tau_0 = k, tau_0 < tau_a) for k = 1..K,
// summing over all paths by propagating the sub-stochastic mass step by step.
std::vector<double> ruin_passage_law(const WalkSpec& w, int z, int K) {
    std::vector<double> mass(w.a + 1, 0.0);
    mass[z] = 1.0;
    std::vector<double> law(K + 1, 0.0);
    for (int k = 1; k <= K; ++k) {
        std::vector<double> next(w.a + 1, 0.0);
        for (int x = 1; x < w.a; ++x) {
            next[x + 1] += w.p * mass[x];
            next[x - 1] += w.q * mass[x];
        }
        law[k] = next[0];
        next[0] = 0.0;
        next[w.a] = 0.0;
        mass = next;
    }
    return law;
}

}  // namespace

TEST_CASE("eigenvalues match closed form and numerical diagonalization") {
    const auto d2 = decompose(validate_walk(2, 0.5));
    REQUIRE(d2.modes() == 1);
    CHECK(std::abs(d2.lambda(1)) < 1e-16);

    const WalkSpec w = validate_walk(10, 0.6);
    const auto d = decompose(w);
    CHECK(d.lambda(1) == doctest::Approx(0.93184127258883243).epsilon(1e-14));

    const int n = w.a - 1;
    Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) sym(i, i + 1) = sym(i + 1, i) = std::sqrt(w.p * w.q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    for (int nu = 1; nu <= n; ++nu) {
        // Eigen sorts ascending; lambda_nu is descending in nu.
        CHECK(std::abs(d.lambda(nu) - es.eigenvalues()(n - nu)) < 1e-13);
    }
}

TEST_CASE("decomposition invariants") {
    for (int a : {2, 5, 10, 17, 32, 64}) {
        for (double p : {0.1, 0.5, 0.7, 0.9}) {
            const auto d = decompose(validate_walk(a, p));
            for (int nu = 1; nu <= d.modes(); ++nu) {
                CHECK(std::abs(d.lambda(nu)) < 1.0);
                if (nu > 1) CHECK(d.lambda(nu) < d.lambda(nu - 1));
            }
            const Eigen::MatrixXd gram = d.psi * d.psi.transpose();
            CHECK((gram - Eigen::MatrixXd::Identity(d.modes(), d.modes())).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK(d.A.allFinite());
            CHECK(d.B.allFinite());
            for (int x = 1; x < a; ++x) {
                CHECK(d.h[x - 1] == doctest::Approx(std::pow(d.walk.q / d.walk.p, x / 2.0)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("A coefficients match direct evaluation") {
    const WalkSpec w = validate_walk(7, 0.35);
    const auto d = decompose(w);
    const double pi = std::numbers::pi;
    for (int nu = 1; nu < 7; ++nu) {
        for (int z = 1; z < 7; ++z) {
            const double direct = 2.0 / 7 * std::pow(w.q / w.p, z / 2.0) * std::sin(pi * nu * z / 7) *
                                  std::sin(pi * nu / 7.0);
            CHECK(std::abs(d.A_at(nu, z) - direct) <= 1e-14);
        }
    }
}

TEST_CASE("A table reproduces brute-force first-passage laws at a=4, p=0.7") {
    const WalkSpec w = validate_walk(4, 0.7);
    const auto d = decompose(w);
    const double root_pq = std::sqrt(w.p * w.q);
    for (int z = 1; z < 4; ++z) {
        const auto law = ruin_passage_law(w, z, 60);
        for (int k = 1; k <= 60; ++k) {
            double spectral = 0.0;
            for (int nu = 1; nu <= d.modes(); ++nu) {
                spectral += root_pq * d.A_at(nu, z) * std::pow(d.lambda(nu), k - 1);
            }
            CHECK(std::abs(spectral - law[k]) <= 1e-14);
        }
        // Discounted sum of the law is u(z).
        for (double gamma : {0.2, 0.5}) {
            double u = 0.0;
            for (int k = 1; k <= 60; ++k) u += law[k] * std::pow(1 - gamma, k);
            CHECK(std::abs(u - spectral_u(d, z, gamma)) <= 1e-12);
        }
    }
}

TEST_CASE("transfer function values and limits") {
    const auto d2 = decompose(validate_walk(2, 0.5));
    for (double g : {0.1, 0.5, 0.9}) CHECK(std::abs(transfer(d2, 1, g)) < 1e-15);

    const auto d = decompose(validate_walk(10, 0.6));
    CHECK(transfer(d, 1, 0.5) == doctest::Approx(0.87238090058701323).epsilon(1e-13));
    CHECK(std::abs(transfer(d, 1, 1.0 - 1e-12)) < 1e-11);
    CHECK_THROWS_AS(transfer(d, 0, 0.5), DomainError);
    CHECK_THROWS_AS(transfer(d, 10, 0.5), DomainError);
    CHECK_THROWS_AS(transfer(d, 1, 1.0), DomainError);

    for (double g : gamma_grid()) {
        std::vector<double> values;
        for (int nu = 1; nu <= d.modes(); ++nu) {
            values.push_back(transfer(d, nu, g));
            CHECK(1.0 - d.lambda(nu) * (1 - g) >= 1.0 - std::abs(d.lambda(nu)));
        }
        for (std::size_t i = 1; i < values.size(); ++i) CHECK(values[i] < values[i - 1]);
    }
}

TEST_CASE("spectral reconstruction equals the exact solver") {
    const auto d2 = decompose(validate_walk(2, 0.3));
    for (double g : {0.1, 0.6}) CHECK(std::abs(spectral_s(d2, 1, g) - (1 - g)) <= 1e-14);

    const WalkSpec w10 = validate_walk(10, 0.6);
    const auto d10 = decompose(w10);
    CHECK(std::abs(spectral_u(d10, 5, 0.5) - solve_discounted(w10, 0.5).u[5]) <= 1e-9);

    const WalkSpec w = validate_walk(12, 0.7);
    const auto d = decompose(w);
    double worst = 0.0;
    for (double g : gamma_grid()) {
        const auto sol = solve_discounted(w, g);
        for (int z = 1; z < 12; ++z) {
            worst = std::max({worst, std::abs(spectral_u(d, z, g) - sol.u[z]),
                              std::abs(spectral_s(d, z, g) - sol.s[z])});
        }
    }
    CHECK(worst <= 1e-9);
    CHECK_THROWS_AS(spectral_u(d, 0, 0.5), DomainError);
    CHECK_THROWS_AS(spectral_s(d, 12, 0.5), DomainError);
}

TEST_CASE("duality identity") {
    CHECK(duality_residual(decompose(validate_walk(10, 0.6)), 3) <= 1e-12);
    CHECK(duality_residual(decompose(validate_walk(9, 0.7)), 4) <= 1e-12);
    CHECK(duality_residual(decompose(validate_walk(2, 0.5)), 1) <= 1e-16);
}

TEST_CASE("off-pair ratios depend on the mode") {
    for (int a : {4, 6, 9, 10, 12}) {
        for (double p : {0.3, 0.5, 0.7}) {
            const auto d = decompose(validate_walk(a, p));
            bool found = false;
            for (int z = 1; z < a && !found; ++z) {
                for (int zp = 1; zp < a; ++zp) {
                    if (z + zp == a) continue;
                    double lo = 1e300, hi = -1e300;
                    for (int nu = 1; nu <= d.modes(); ++nu) {
                        const double den = d.A_at(nu, zp);
                        if (std::abs(den) < 1e-12) continue;
                        const double r = d.B_at(nu, z) / den;
                        lo = std::min(lo, r);
                        hi = std::max(hi, r);
                    }
                    if (hi - lo > 1e-6) {
                        found = true;
                        break;
                    }
                }
            }
            CHECK(found);
        }
    }
}

TEST_CASE("rank check") {
    const auto d = decompose(validate_walk(10, 0.6));
    const std::vector<int> pair{3, 7};
    CHECK(rank_check(d, pair));
    const std::vector<int> all{1, 2, 3, 4, 5, 6, 7, 8, 9};
    CHECK(rank_check(d, all));
    const std::vector<int> dup{3, 3};
    CHECK_THROWS_AS(rank_check(d, dup), DomainError);
    const std::vector<int> outside{0, 3};
    CHECK_THROWS_AS(rank_check(d, outside), DomainError);
}

TEST_CASE("oversized domains are rejected") {
    CHECK_THROWS_AS(decompose(validate_walk(65, 0.6)), RangeError);
    CHECK_NOTHROW(decompose(validate_walk(64, 0.6)));
}
