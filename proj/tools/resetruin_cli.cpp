#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resetruin/critical.hpp"
#include "resetruin/exact.hpp"
#include "resetruin/harness.hpp"
#include "resetruin/montecarlo.hpp"

using namespace resetruin;
using nlohmann::json;

namespace {

struct WalkArgs {
    int a = 10;
    double p = 0.6;
    std::string sites = "3,7";
    std::string weights;
};

void add_walk(CLI::App* cmd, WalkArgs& w, bool required) {
    auto* a = cmd->add_option("--a", w.a, "domain size (absorbing at 0 and a)");
    auto* p = cmd->add_option("--p", w.p, "up-step probability");
    auto* s = cmd->add_option("--sites", w.sites, "comma-separated reset sites");
    if (required) {
        a->required();
        p->required();
        s->required();
    } else {
        a->capture_default_str();
        p->capture_default_str();
        s->capture_default_str();
    }
}

ResetSpec reset_from(const WalkSpec& walk, const WalkArgs& w) {
    const auto sites = parse_int_list(w.sites);
    const auto weights = parse_real_list(w.weights);
    return validate_reset(walk, sites, weights);
}

json provenance(const std::string& command) {
    return {{"tool", "resetruin"}, {"tool_version", kToolVersion}, {"command", command}};
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

json written(const std::vector<std::filesystem::path>& files) {
    json out = json::array();
    for (const auto& f : files) out.push_back(f.string());
    return {{"files", out}};
}

int verify_table1(double tol, BisectionObjective objective, bool json_only) {
    const auto rows = table1_report(tol, objective);
    bool all = true;
    json out = json::array();
    if (!json_only) {
        std::printf("%3s %4s %-9s %14s %14s %10s %14s %10s %s\n", "a", "p", "sites", "pi1_theory",
                    "pi1_bisected", "pi1_err", "C*_theory", "C*_err", "");
    }
    for (const auto& r : rows) {
        all = all && r.pass;
        out.push_back(to_json(r));
        if (json_only) continue;
        std::string sites;
        for (int z : r.sites) sites += (sites.empty() ? "" : ",") + std::to_string(z);
        char bisected[32] = "degenerate";
        char pi_err[32] = "-";
        if (r.pi_star_bisected) {
            std::snprintf(bisected, sizeof bisected, "%.10f", *r.pi_star_bisected);
            std::snprintf(pi_err, sizeof pi_err, "%.2e", *r.pi_error);
        }
        std::printf("%3d %4.2f %-9s %14.10f %14s %10s %14.10f %10.2e %s\n", r.a, r.p, sites.c_str(),
                    r.pi_star_theory, bisected, pi_err, r.C_star_theory, r.abs_error,
                    r.pass ? "PASS" : "FAIL");
    }
    if (!json_only) std::printf("\n");
    print({{"table", "table1"}, {"tolerance", tol}, {"rows", out}, {"pass", all},
           {"provenance", provenance("verify table1")}});
    return all ? 0 : 1;
}

int verify_table2(std::int64_t n, std::uint64_t seed, const SimulationOptions& opt, bool json_only) {
    const auto report = table2_report(n, seed, opt);
    if (!json_only) {
        std::printf("%-30s %14s %14s %10s %8s %s\n", "config", "C*_theory", "C_hat", "sigma", "dev/sig", "");
        for (const auto& r : report.rows) {
            std::printf("%-30s %14.10f %14.10f %10.2e %8.2f %s\n", r.config.label.c_str(), r.C_star_theory,
                        r.estimate.C_hat, r.estimate.std_error, r.sigmas, r.pass ? "PASS" : "FAIL");
        }
        std::printf("chi2 = %.3f (threshold %.2f) %s\n\n", report.chi2, kChiSquare99Nine,
                    report.chi2_pass ? "PASS" : "FAIL");
    }
    json j = to_json(report);
    j["table"] = "table2";
    j["n"] = n;
    j["seed"] = seed;
    j["provenance"] = provenance("verify table2");
    print(j);
    return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gambler's ruin under stochastic resetting"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    // solve
    WalkArgs solve_w;
    double solve_gamma = 0.5;
    std::optional<int> solve_z;
    auto* solve = app.add_subcommand("solve", "exact coupling constant and ruin probability");
    add_walk(solve, solve_w, true);
    solve->add_option("--weights", solve_w.weights, "reset weights (fractions like 4/13 allowed)")->required();
    solve->add_option("--gamma", solve_gamma, "resetting rate in (0,1)")->required();
    solve->add_option("--z", solve_z, "starting site for q_z");

    // critical
    WalkArgs crit_w;
    double neutral_weight = 0.0;
    auto* crit = app.add_subcommand("critical", "reset-neutral distribution for a symmetric site set");
    add_walk(crit, crit_w, true);
    crit->add_option("--neutral-weight", neutral_weight, "weight on the midpoint site")->capture_default_str();

    // sweep-gamma
    WalkArgs sweep_w;
    std::string pi1_list = "0.10,0.20,4/13,0.45,0.65";
    std::string gamma_grid = "0.05:0.05:0.95";
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep-gamma", "C(pi, gamma) curves for two-site distributions");
    add_walk(sweep, sweep_w, false);
    sweep->add_option("--pi1", pi1_list, "weights on the first site")->capture_default_str();
    sweep->add_option("--gamma-grid", gamma_grid, "LO:STEP:HI")->capture_default_str();
    sweep->add_option("--out", sweep_out, "output directory")->required();

    // profile
    WalkArgs prof_w;
    prof_w.weights = "4/13,9/13";
    std::string gammas = "0,0.2,0.4,0.6,0.8";
    std::string prof_out;
    auto* prof = app.add_subcommand("profile", "q_z over the interior for several gammas");
    add_walk(prof, prof_w, false);
    prof->add_option("--weights", prof_w.weights, "reset weights")->capture_default_str();
    prof->add_option("--gammas", gammas, "gamma values; 0 is evaluated at 1e-8")->capture_default_str();
    prof->add_option("--out", prof_out, "output directory")->required();

    // universality
    int uni_a = 10;
    std::string p_grid = "0.1:0.05:0.9";
    std::string pairs = "1,9;2,8;3,7;4,6";
    std::string uni_out;
    auto* uni = app.add_subcommand("universality", "C* against p for several symmetric pairs");
    uni->add_option("--a", uni_a, "domain size")->capture_default_str();
    uni->add_option("--p-grid", p_grid, "LO:STEP:HI")->capture_default_str();
    uni->add_option("--pairs", pairs, "site pairs, e.g. \"1,9;2,8\"")->capture_default_str();
    uni->add_option("--out", uni_out, "output directory")->required();

    // mc
    WalkArgs mc_w;
    double mc_gamma = 0.5;
    std::int64_t mc_n = 0;
    std::uint64_t mc_seed = 0;
    std::optional<double> cstar_ref;
    SimulationOptions sim;
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the coupling constant");
    add_walk(mc, mc_w, true);
    mc->add_option("--weights", mc_w.weights, "reset weights")->required();
    mc->add_option("--gamma", mc_gamma, "resetting rate in (0,1)")->required();
    mc->add_option("--n", mc_n, "trajectories per reset site")->required()->check(CLI::PositiveNumber);
    mc->add_option("--seed", mc_seed, "seed")->required();
    mc->add_option("--cstar-ref", cstar_ref, "reference C used for the standard error");
    mc->add_option("--threads", sim.threads, "OpenMP threads (0 = default)");
    mc->add_option("--step-cap", sim.step_cap, "per-trajectory step limit")->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "reproduce the verification tables");
    verify->require_subcommand(1);
    double t1_tol = 1e-9;
    bool json_only = false;
    auto* t1 = verify->add_subcommand("table1", "exact path with bisection");
    t1->add_option("--tol", t1_tol, "row tolerance on C*")->capture_default_str();
    t1->add_flag("--json-only", json_only, "skip the human-readable table");
    BisectionObjective objective = BisectionObjective::end_to_end;
    const std::map<std::string, BisectionObjective> objectives{{"end-to-end", BisectionObjective::end_to_end},
                                                               {"slope", BisectionObjective::slope_at_half}};
    t1->add_option("--objective", objective, "bisection objective: end-to-end or slope")
        ->transform(CLI::CheckedTransformer(objectives, CLI::ignore_case))
        ->capture_default_str();
    std::int64_t t2_n = 1'000'000;
    std::uint64_t t2_seed = 42;
    SimulationOptions t2_sim;
    auto* t2 = verify->add_subcommand("table2", "Monte Carlo validation");
    t2->add_option("--n", t2_n, "trajectories per reset site")->capture_default_str()->check(CLI::PositiveNumber);
    t2->add_option("--seed", t2_seed, "seed")->capture_default_str();
    t2->add_option("--threads", t2_sim.threads, "OpenMP threads (0 = default)");
    t2->add_flag("--json-only", json_only, "skip the human-readable table");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) {
            const WalkSpec walk = validate_walk(solve_w.a, solve_w.p);
            const ResetSpec reset = reset_from(walk, solve_w);
            const auto c = coupling_constant(walk, reset, solve_gamma);
            json out = {{"u_bar", c.u_bar}, {"s_bar", c.s_bar}, {"C", c.C}};
            if (solve_z) out["q_z"] = ruin_probability(walk, reset, solve_gamma, *solve_z);
            print(out);
        } else if (*crit) {
            const WalkSpec walk = validate_walk(crit_w.a, crit_w.p);
            const auto family = critical_family(walk, parse_int_list(crit_w.sites));
            const auto pi = family.materialize(neutral_weight);
            json pi_star = json::object();
            for (std::size_t i = 0; i < pi.size(); ++i) pi_star[std::to_string(pi.sites[i])] = pi.weights[i];
            json pair_list = json::array();
            for (const auto& [z, zp] : family.pairs()) pair_list.push_back({z, zp});
            print({{"pi_star", pi_star},
                   {"C_star", family.C_star()},
                   {"K", family.certificate().K},
                   {"pairs", pair_list},
                   {"neutral_site", family.neutral_site() ? json(*family.neutral_site()) : json()}});
        } else if (*sweep) {
            const WalkSpec walk = validate_walk(sweep_w.a, sweep_w.p);
            const auto series = sweep_C_vs_gamma(walk, parse_int_list(sweep_w.sites), parse_real_list(pi1_list),
                                                 parse_grid(gamma_grid));
            print(written(write_series_files(sweep_out, series, provenance("sweep-gamma"))));
        } else if (*prof) {
            const WalkSpec walk = validate_walk(prof_w.a, prof_w.p);
            const auto series = profile_q_vs_z(walk, reset_from(walk, prof_w), parse_real_list(gammas));
            print(written(write_series_files(prof_out, series, provenance("profile"))));
        } else if (*uni) {
            const auto series = universality_Cstar_vs_p(uni_a, parse_grid(p_grid), parse_pairs(pairs));
            print(written(write_series_files(uni_out, series, provenance("universality"))));
        } else if (*mc) {
            const WalkSpec walk = validate_walk(mc_w.a, mc_w.p);
            json out = to_json(estimate(walk, reset_from(walk, mc_w), mc_gamma, mc_n, mc_seed, cstar_ref, sim));
            out["gamma"] = mc_gamma;
            out["provenance"] = provenance("mc");
            print(out);
        } else if (*t1) {
            return verify_table1(t1_tol, objective, json_only);
        } else if (*t2) {
            return verify_table2(t2_n, t2_seed, t2_sim, json_only);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
