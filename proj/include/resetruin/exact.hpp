#pragma once

#include <vector>

#include "resetruin/core.hpp"

namespace resetruin {

/**
 * Discounted first-cycle probabilities at resetting rate gamma.
 *
 * u[z] is the probability of ruin before the first reset, s[z] the
 * probability of absorption (at either end) before the first reset. Both
 * arrays cover 0..a inclusive, so u[0]=s[0]=1, u[a]=0, s[a]=1 are stored.
 */
struct DiscountedSolutions {
    double gamma = 0.0;
    std::vector<double> u;
    std::vector<double> s;
    /// Sweeps performed by the iterative solver; 0 for the direct solver.
    int iterations = 0;

    int a() const { return static_cast<int>(u.size()) - 1; }
};

struct CouplingBreakdown {
    double u_bar = 0.0;
    double s_bar = 0.0;
    double C = 0.0;
};

/// Direct tridiagonal elimination of the two discounted recurrences.
DiscountedSolutions solve_discounted(const WalkSpec& walk, double gamma);

/// Jacobi fixed-point iteration from zero interior data. Independent oracle
/// for solve_discounted(); throws ConvergenceError when max_iter sweeps do
/// not bring the largest interior update below tol.
DiscountedSolutions solve_discounted_iterative(const WalkSpec& walk, double gamma,
                                               double tol = 1e-12, int max_iter = 10000);

/// Largest recurrence residual of u and s over interior sites.
double recurrence_residual(const WalkSpec& walk, const DiscountedSolutions& sol);

CouplingBreakdown coupling_constant(const WalkSpec& walk, const ResetSpec& reset, double gamma);
CouplingBreakdown coupling_constant(const DiscountedSolutions& sol, const ResetSpec& reset);

double ruin_probability(const WalkSpec& walk, const ResetSpec& reset, double gamma, int z);
double escape_probability(const WalkSpec& walk, const ResetSpec& reset, double gamma, int z);

/// q_z(gamma) for every z in 0..a from a single solve.
std::vector<double> ruin_profile(const WalkSpec& walk, const ResetSpec& reset, double gamma);

}  // namespace resetruin
