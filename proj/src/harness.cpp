#include "resetruin/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "resetruin/critical.hpp"
#include "resetruin/exact.hpp"

namespace resetruin {
namespace {

double objective(const WalkSpec& walk, const ResetSpec& reset, BisectionObjective kind) {
    if (kind == BisectionObjective::slope_at_half) {
        constexpr double h = 1e-3;
        return (coupling_constant(walk, reset, kVerificationGamma + h).C -
                coupling_constant(walk, reset, kVerificationGamma - h).C) /
               (2.0 * h);
    }
    return coupling_constant(walk, reset, kBisectionGammaHi).C -
           coupling_constant(walk, reset, kBisectionGammaLo).C;
}

ResetSpec two_site(const WalkSpec& walk, std::pair<int, int> pair, double w_first) {
    const std::vector<int> sites{pair.first, pair.second};
    const std::vector<double> weights{w_first, 1.0 - w_first};
    return validate_reset(walk, sites, weights);
}

std::string compact(double x) {
    std::ostringstream out;
    out << std::setprecision(12) << x;
    return out.str();
}

}  // namespace

double bisect_critical_weight(const WalkSpec& walk, std::pair<int, int> pair, double tol,
                              BisectionObjective kind) {
    const std::vector<int> sites{pair.first, pair.second};
    const auto partition = check_symmetry(walk, sites);
    if (!partition || partition->pairs.size() != 1 || partition->neutral) {
        throw SymmetryError("bisection needs a single symmetric pair (z, a-z)");
    }
    if (walk.unbiased()) {
        throw DegenerateError("coupling constant is flat for every symmetric pi when p = 1/2");
    }
    if (!(tol > 0.0)) {
        throw DomainError("bisection tolerance must be positive");
    }

    constexpr double edge = 1e-9;
    double lo = edge;
    double hi = 1.0 - edge;
    const double g_lo = objective(walk, two_site(walk, pair, lo), kind);
    const double g_hi = objective(walk, two_site(walk, pair, hi), kind);
    if (std::signbit(g_lo) == std::signbit(g_hi) || g_lo == 0.0 || g_hi == 0.0) {
        throw NoSignChangeError("bisection objective does not change sign on (0,1)");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double g_mid = objective(walk, two_site(walk, pair, mid), kind);
        if (g_mid == 0.0) {
            return mid;
        }
        if (std::signbit(g_mid) == std::signbit(g_lo)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<VerificationCase> table1_cases() {
    return {
        {10, 0.5, {3, 7}}, {10, 0.6, {3, 7}},    {10, 0.6, {2, 8}}, {10, 0.7, {3, 7}},
        {10, 0.7, {3, 5, 7}}, {9, 0.7, {3, 6}}, {8, 0.6, {2, 6}},  {12, 0.6, {4, 8}},
    };
}

std::vector<VerificationRow> table1_report(double tol, BisectionObjective objective) {
    const auto cases = table1_cases();
    std::vector<VerificationRow> rows(cases.size());
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& c = cases[k];
        const WalkSpec walk = validate_walk(c.a, c.p);
        const CriticalFamily family = critical_family(walk, c.sites);
        const auto pair = family.pairs().front();
        const ResetSpec theory = family.materialize(0.0);

        VerificationRow& row = rows[k];
        row.a = c.a;
        row.p = c.p;
        row.sites = c.sites;
        row.degenerate = walk.unbiased();
        row.pi_star_theory = theory.weights[0];
        row.C_star_theory = family.C_star();
        row.tolerance = row.degenerate ? kDegenerateRowTolerance : tol;

        if (row.degenerate) {
            row.C_star_measured = coupling_constant(walk, theory, kVerificationGamma).C;
        } else {
            const double pi1 = bisect_critical_weight(walk, pair, 1e-12, objective);
            row.pi_star_bisected = pi1;
            row.pi_error = std::abs(pi1 - row.pi_star_theory);
            row.C_star_measured = coupling_constant(walk, two_site(walk, pair, pi1), kVerificationGamma).C;
        }
        row.abs_error = std::abs(row.C_star_measured - row.C_star_theory);
        row.pass = row.abs_error <= row.tolerance;
    }
    return rows;
}

std::vector<McCase> table2_cases() {
    return {
        {"a=10 p=0.5 {3,7}", 10, 0.5, {3, 7}, 0.0},
        {"a=10 p=0.6 {3,7}", 10, 0.6, {3, 7}, 0.0},
        {"a=10 p=0.6 {2,8}", 10, 0.6, {2, 8}, 0.0},
        {"a=10 p=0.7 {3,7}", 10, 0.7, {3, 7}, 0.0},
        {"a=10 p=0.7 {3,5,7} pi5=0.3", 10, 0.7, {3, 5, 7}, 0.3},
        {"a=10 p=0.7 {3,5,7} pi5=0.7", 10, 0.7, {3, 5, 7}, 0.7},
        {"a=9 p=0.7 {3,6}", 9, 0.7, {3, 6}, 0.0},
        {"a=8 p=0.6 {2,6}", 8, 0.6, {2, 6}, 0.0},
        {"a=12 p=0.6 {4,8}", 12, 0.6, {4, 8}, 0.0},
    };
}

McReport table2_report(std::int64_t n, std::uint64_t seed, const SimulationOptions& options) {
    McReport report;
    const auto cases = table2_cases();
    std::vector<std::pair<McEstimate, double>> entries;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const McCase& c = cases[k];
        const WalkSpec walk = validate_walk(c.a, c.p);
        const CriticalFamily family = critical_family(walk, c.sites);

        McRow row;
        row.config = c;
        row.reset = family.materialize(c.neutral_weight);
        row.C_star_theory = family.C_star();
        row.estimate = estimate(walk, row.reset, kVerificationGamma, n, derive_key(seed, k),
                                row.C_star_theory, options);
        row.deviation = std::abs(row.estimate.C_hat - row.C_star_theory);
        row.sigmas = row.deviation / row.estimate.std_error;
        row.pass = row.deviation <= kSigmaBound * row.estimate.std_error;
        entries.emplace_back(row.estimate, row.C_star_theory);
        report.rows.push_back(std::move(row));
    }
    report.chi2 = chi_square(entries);
    report.chi2_pass = report.chi2 <= kChiSquare99Nine;
    report.pass = report.chi2_pass && std::all_of(report.rows.begin(), report.rows.end(),
                                                  [](const McRow& r) { return r.pass; });
    return report;
}

std::string to_string(SeriesKind kind) {
    switch (kind) {
        case SeriesKind::C_vs_gamma:
            return "C_vs_gamma";
        case SeriesKind::q_vs_z:
            return "q_vs_z";
        case SeriesKind::Cstar_vs_p:
            return "Cstar_vs_p";
    }
    return "unknown";
}

std::vector<SweepSeries> sweep_C_vs_gamma(const WalkSpec& walk, std::span<const int> sites,
                                          std::span<const double> pi1_list,
                                          std::span<const double> gamma_grid) {
    if (sites.size() != 2) {
        throw DomainError("gamma sweep takes exactly two reset sites");
    }
    std::vector<double> gammas(gamma_grid.begin(), gamma_grid.end());
    std::sort(gammas.begin(), gammas.end());
    const std::pair<int, int> pair{sites[0], sites[1]};

    for (double gamma : gammas) {
        if (!(gamma > 0.0 && gamma < 1.0)) {
            throw DomainError("gamma grid must lie inside (0,1)");
        }
    }
    // Solve once per gamma; every pi reuses the same u, s.
    std::vector<DiscountedSolutions> solutions(gammas.size());
    const auto n_gamma = static_cast<std::int64_t>(gammas.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t g = 0; g < n_gamma; ++g) {
        solutions[g] = solve_discounted(walk, gammas[g]);
    }

    std::vector<SweepSeries> out;
    for (double pi1 : pi1_list) {
        SweepSeries series;
        series.kind = SeriesKind::C_vs_gamma;
        series.x_name = "gamma";
        series.y_name = "C";
        series.label = "pi1_" + compact(pi1);
        series.parameters = {{"a", walk.a},   {"p", walk.p},       {"sites", {pair.first, pair.second}},
                             {"pi1", pi1}};
        const ResetSpec reset = two_site(walk, pair, pi1);
        for (std::size_t g = 0; g < gammas.size(); ++g) {
            series.points.emplace_back(gammas[g], coupling_constant(solutions[g], reset).C);
        }
        out.push_back(std::move(series));
    }
    return out;
}

std::vector<SweepSeries> profile_q_vs_z(const WalkSpec& walk, const ResetSpec& reset,
                                        std::span<const double> gamma_list) {
    std::vector<SweepSeries> out(gamma_list.size());
    const auto count = static_cast<std::int64_t>(gamma_list.size());
    for (std::int64_t k = 0; k < count; ++k) {
        const double requested = gamma_list[k];
        const double gamma = requested == 0.0 ? kClassicalProxyGamma : requested;
        const auto q = ruin_profile(walk, reset, gamma);

        SweepSeries& series = out[k];
        series.kind = SeriesKind::q_vs_z;
        series.x_name = "z";
        series.y_name = "q";
        series.label = "gamma_" + compact(requested);
        series.parameters = {{"a", walk.a},
                             {"p", walk.p},
                             {"sites", reset.sites},
                             {"weights", reset.weights},
                             {"gamma", requested},
                             {"gamma_evaluated", gamma}};
        if (requested == 0.0) {
            series.parameters["note"] = "gamma=0 evaluated at gamma=1e-8 (model requires gamma>0)";
        }
        for (int z = 1; z < walk.a; ++z) {
            series.points.emplace_back(z, q[z]);
        }
    }
    return out;
}

std::vector<SweepSeries> universality_Cstar_vs_p(int a, std::span<const double> p_grid,
                                                 std::span<const std::pair<int, int>> site_pairs) {
    std::vector<double> ps(p_grid.begin(), p_grid.end());
    std::sort(ps.begin(), ps.end());
    for (double p : ps) {
        validate_walk(a, p);
    }
    for (const auto& [z1, z2] : site_pairs) {
        if (z1 < 1 || z2 < 1 || z1 + z2 != a || z1 == z2) {
            throw SymmetryError("universality pairs must satisfy z1 + z2 = a with z1 != z2");
        }
    }
    std::vector<SweepSeries> out(site_pairs.size());
    const auto count = static_cast<std::int64_t>(site_pairs.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < count; ++k) {
        const auto [z1, z2] = site_pairs[k];
        SweepSeries& series = out[k];
        series.kind = SeriesKind::Cstar_vs_p;
        series.x_name = "p";
        series.y_name = "C_star";
        series.label = "sites_" + std::to_string(z1) + "_" + std::to_string(z2);
        series.parameters = {{"a", a}, {"sites", {z1, z2}}, {"gamma", kVerificationGamma}};
        for (double p : ps) {
            const WalkSpec walk = validate_walk(a, p);
            const std::vector<int> sites{z1, z2};
            const ResetSpec reset = critical_family(walk, sites).materialize(0.0);
            series.points.emplace_back(p, coupling_constant(walk, reset, kVerificationGamma).C);
        }
    }
    return out;
}

}  // namespace resetruin
