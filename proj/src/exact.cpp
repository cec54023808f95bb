#include "resetruin/exact.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

namespace resetruin {
namespace {

void check_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        std::ostringstream msg;
        msg << "resetting rate gamma must lie in (0,1), got " << gamma;
        throw DomainError(msg.str());
    }
}

void check_site(const WalkSpec& walk, int z) {
    if (z < 0 || z > walk.a) {
        throw DomainError("starting site " + std::to_string(z) + " outside [0," +
                          std::to_string(walk.a) + "]");
    }
}

DiscountedSolutions boundary_initialized(const WalkSpec& walk, double gamma) {
    DiscountedSolutions sol;
    sol.gamma = gamma;
    sol.u.assign(walk.a + 1, 0.0);
    sol.s.assign(walk.a + 1, 0.0);
    sol.u[0] = 1.0;
    sol.s[0] = 1.0;
    sol.u[walk.a] = 0.0;
    sol.s[walk.a] = 1.0;
    return sol;
}

}  // namespace

DiscountedSolutions solve_discounted(const WalkSpec& walk, double gamma) {
    check_gamma(gamma);
    DiscountedSolutions sol = boundary_initialized(walk, gamma);

    // Interior rows z = 1..a-1:  x(z) - lo*x(z-1) - up*x(z+1) = 0, with the
    // boundary values moved to the right-hand side. The matrix has unit
    // diagonal and off-diagonal row sum 1-gamma < 1, so elimination without
    // pivoting is stable.
    const int n = walk.a - 1;
    const double up = (1.0 - gamma) * walk.p;
    const double lo = (1.0 - gamma) * walk.q;

    std::vector<double> c_prime(n, 0.0);
    std::vector<double> du(n, 0.0);
    std::vector<double> ds(n, 0.0);
    du[0] = lo * sol.u[0];
    ds[0] = lo * sol.s[0];
    du[n - 1] += up * sol.u[walk.a];
    ds[n - 1] += up * sol.s[walk.a];

    c_prime[0] = -up;
    for (int i = 1; i < n; ++i) {
        const double pivot = 1.0 + lo * c_prime[i - 1];
        c_prime[i] = -up / pivot;
        du[i] = (du[i] + lo * du[i - 1]) / pivot;
        ds[i] = (ds[i] + lo * ds[i - 1]) / pivot;
    }
    sol.u[n] = du[n - 1];
    sol.s[n] = ds[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        sol.u[i + 1] = du[i] - c_prime[i] * sol.u[i + 2];
        sol.s[i + 1] = ds[i] - c_prime[i] * sol.s[i + 2];
    }
    return sol;
}

DiscountedSolutions solve_discounted_iterative(const WalkSpec& walk, double gamma, double tol,
                                               int max_iter) {
    check_gamma(gamma);
    if (!(tol > 0.0)) {
        throw DomainError("tolerance must be positive");
    }
    if (max_iter < 1) {
        throw DomainError("max_iter must be >= 1");
    }
    DiscountedSolutions sol = boundary_initialized(walk, gamma);
    const double up = (1.0 - gamma) * walk.p;
    const double lo = (1.0 - gamma) * walk.q;

    std::vector<double> next_u = sol.u;
    std::vector<double> next_s = sol.s;
    for (int it = 1; it <= max_iter; ++it) {
        double largest = 0.0;
        for (int z = 1; z < walk.a; ++z) {
            next_u[z] = up * sol.u[z + 1] + lo * sol.u[z - 1];
            next_s[z] = up * sol.s[z + 1] + lo * sol.s[z - 1];
            largest = std::max({largest, std::abs(next_u[z] - sol.u[z]),
                                std::abs(next_s[z] - sol.s[z])});
        }
        std::swap(sol.u, next_u);
        std::swap(sol.s, next_s);
        sol.iterations = it;
        if (largest < tol) {
            return sol;
        }
    }
    std::ostringstream msg;
    msg << "fixed-point iteration did not reach tolerance " << tol << " in " << max_iter
        << " sweeps";
    throw ConvergenceError(msg.str());
}

double recurrence_residual(const WalkSpec& walk, const DiscountedSolutions& sol) {
    const double up = (1.0 - sol.gamma) * walk.p;
    const double lo = (1.0 - sol.gamma) * walk.q;
    double worst = 0.0;
    for (int z = 1; z < walk.a; ++z) {
        worst = std::max(worst, std::abs(sol.u[z] - (up * sol.u[z + 1] + lo * sol.u[z - 1])));
        worst = std::max(worst, std::abs(sol.s[z] - (up * sol.s[z + 1] + lo * sol.s[z - 1])));
    }
    return worst;
}

CouplingBreakdown coupling_constant(const DiscountedSolutions& sol, const ResetSpec& reset) {
    CouplingBreakdown out;
    for (std::size_t i = 0; i < reset.size(); ++i) {
        out.u_bar += reset.weights[i] * sol.u[reset.sites[i]];
        out.s_bar += reset.weights[i] * sol.s[reset.sites[i]];
    }
    assert(out.s_bar > 0.0);
    out.C = out.u_bar / out.s_bar;
    return out;
}

CouplingBreakdown coupling_constant(const WalkSpec& walk, const ResetSpec& reset, double gamma) {
    return coupling_constant(solve_discounted(walk, gamma), reset);
}

double ruin_probability(const WalkSpec& walk, const ResetSpec& reset, double gamma, int z) {
    check_site(walk, z);
    const auto sol = solve_discounted(walk, gamma);
    const auto cb = coupling_constant(sol, reset);
    return sol.u[z] + (1.0 - sol.s[z]) * cb.C;
}

double escape_probability(const WalkSpec& walk, const ResetSpec& reset, double gamma, int z) {
    check_site(walk, z);
    const auto sol = solve_discounted(walk, gamma);
    // v = s - u is the escape-before-reset probability; same renewal algebra.
    double v_bar = 0.0;
    double s_bar = 0.0;
    for (std::size_t i = 0; i < reset.size(); ++i) {
        const int zi = reset.sites[i];
        v_bar += reset.weights[i] * (sol.s[zi] - sol.u[zi]);
        s_bar += reset.weights[i] * sol.s[zi];
    }
    return (sol.s[z] - sol.u[z]) + (1.0 - sol.s[z]) * (v_bar / s_bar);
}

std::vector<double> ruin_profile(const WalkSpec& walk, const ResetSpec& reset, double gamma) {
    const auto sol = solve_discounted(walk, gamma);
    const double C = coupling_constant(sol, reset).C;
    std::vector<double> q(walk.a + 1);
    for (int z = 0; z <= walk.a; ++z) {
        q[z] = sol.u[z] + (1.0 - sol.s[z]) * C;
    }
    return q;
}

}  // namespace resetruin
