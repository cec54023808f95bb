#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "resetruin/critical.hpp"
#include "resetruin/exact.hpp"
#include "resetruin/harness.hpp"

using namespace resetruin;

TEST_CASE("bisection recovers the critical weight") {
    const WalkSpec w = validate_walk(10, 0.6);
    const double pi1 = bisect_critical_weight(w, {3, 7}, 1e-10);
    CHECK(std::abs(pi1 - 4.0 / 13.0) <= 1e-9);
    const std::vector<int> s{3, 7};
    const std::vector<double> wt{pi1, 1 - pi1};
    CHECK(std::abs(coupling_constant(w, validate_reset(w, s, wt), 0.5).C - 0.1163636364) <= 8.53e-10);

    CHECK(std::abs(bisect_critical_weight(w, {2, 8}, 1e-10) - 8.0 / 35.0) <= 1e-9);

    const double slope = bisect_critical_weight(w, {3, 7}, 1e-10, BisectionObjective::slope_at_half);
    CHECK(std::abs(slope - 4.0 / 13.0) <= 1e-6);
}

TEST_CASE("bisection errors") {
    CHECK_THROWS_AS(bisect_critical_weight(validate_walk(10, 0.5), {3, 7}), DegenerateError);
    CHECK_THROWS_AS(bisect_critical_weight(validate_walk(10, 0.6), {3, 6}), SymmetryError);
    CHECK_THROWS_AS(bisect_critical_weight(validate_walk(10, 0.6), {3, 7}, 0.0), DomainError);
}

TEST_CASE("exact verification table") {
    const auto rows = table1_report();
    REQUIRE(rows.size() == 8);
    for (const auto& r : rows) {
        CHECK(r.pass);
        if (r.degenerate) {
            CHECK_FALSE(r.pi_star_bisected);
            CHECK(r.tolerance == kDegenerateRowTolerance);
        } else {
            REQUIRE(r.pi_error);
            CHECK(*r.pi_error <= 1e-7);
        }
    }
    CHECK(rows[0].degenerate);
    CHECK(rows[0].C_star_theory == 0.5);
    CHECK(std::abs(rows[5].pi_star_theory - 0.2190952202) < 5e-11);
    const auto j = to_json(rows[1]);
    CHECK(j["pass"].get<bool>());
    CHECK(j.contains("pi_error"));
}

TEST_CASE("monte carlo table at minimal sample size") {
    const auto report = table2_report(1, 7);
    REQUIRE(report.rows.size() == 9);
    CHECK(std::isfinite(report.chi2));
    CHECK(report.rows[4].reset.weights[1] == doctest::Approx(0.3));
    CHECK(report.rows[5].reset.weights[1] == doctest::Approx(0.7));
    const auto j = to_json(report);
    CHECK(j["rows"].size() == 9);
}

TEST_CASE("monte carlo table is reproducible") {
    SimulationOptions one;
    one.threads = 1;
    SimulationOptions many;
    many.threads = 3;
    const auto x = table2_report(500, 42, one);
    const auto y = table2_report(500, 42, many);
    for (std::size_t k = 0; k < x.rows.size(); ++k) CHECK(x.rows[k].estimate.C_hat == y.rows[k].estimate.C_hat);
    CHECK(x.chi2 == y.chi2);
}

TEST_CASE("figure spot values") {
    const WalkSpec w = validate_walk(10, 0.6);
    const std::vector<int> s37{3, 7};
    const std::vector<double> pi1{0.65};
    const std::vector<double> g{0.05, 0.5};
    const auto sweep = sweep_C_vs_gamma(w, s37, pi1, g);
    REQUIRE(sweep.size() == 1);
    CHECK(sweep[0].label == "pi1_0.65");
    CHECK(std::abs(sweep[0].points[0].second - 0.2408) <= 5e-5);

    const auto pi = critical_family(w, s37).materialize();
    const std::vector<double> gammas{0.0, 0.4};
    const auto prof = profile_q_vs_z(w, pi, gammas);
    REQUIRE(prof.size() == 2);
    CHECK(prof[0].parameters.contains("note"));
    CHECK(prof[0].parameters["gamma_evaluated"].get<double>() == kClassicalProxyGamma);
    CHECK(prof[1].points[1].first == 2.0);
    CHECK(std::abs(prof[1].points[1].second - 0.1785) <= 5e-5);
    for (const auto& [z, q] : prof[0].points) CHECK(std::abs(q - classical_ruin(w, z)) <= 1e-6);

    const std::vector<double> ps{0.45};
    const std::vector<std::pair<int, int>> pairs{{1, 9}, {2, 8}, {3, 7}, {4, 6}};
    const auto uni = universality_Cstar_vs_p(10, ps, pairs);
    REQUIRE(uni.size() == 4);
    for (const auto& series : uni) CHECK(std::abs(series.points[0].second - 0.7317) <= 5e-5);
}

TEST_CASE("sweep inputs are checked") {
    const WalkSpec w = validate_walk(10, 0.6);
    const std::vector<int> three{2, 5, 8};
    const std::vector<double> pi1{0.5};
    const std::vector<double> g{0.5};
    CHECK_THROWS_AS(sweep_C_vs_gamma(w, three, pi1, g), DomainError);
    const std::vector<int> two{3, 7};
    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(sweep_C_vs_gamma(w, two, pi1, bad), DomainError);
    const std::vector<double> ps{0.6};
    const std::vector<std::pair<int, int>> off{{3, 6}};
    CHECK_THROWS_AS(universality_Cstar_vs_p(10, ps, off), SymmetryError);
}

TEST_CASE("series are sorted by x") {
    const WalkSpec w = validate_walk(10, 0.6);
    const std::vector<int> s{3, 7};
    const std::vector<double> pi1{0.2};
    const std::vector<double> g{0.9, 0.1, 0.5};
    const auto sweep = sweep_C_vs_gamma(w, s, pi1, g);
    CHECK(sweep[0].points[0].first == 0.1);
    CHECK(sweep[0].points[2].first == 0.9);
}

TEST_CASE("csv round trip is exact") {
    const WalkSpec w = validate_walk(10, 0.6);
    const std::vector<int> s{3, 7};
    const std::vector<double> pi1{0.1, 4.0 / 13.0};
    const auto sweep = sweep_C_vs_gamma(w, s, pi1, parse_grid("0.05:0.05:0.95"));
    for (const auto& series : sweep) {
        std::stringstream buf;
        write_series_csv(buf, series);
        CHECK(buf.str().rfind("gamma,C\n", 0) == 0);
        const auto back = read_series_csv(buf, series.kind);
        CHECK(back.x_name == series.x_name);
        CHECK(back.points == series.points);
    }

    const auto dir = std::filesystem::temp_directory_path() / "resetruin_test_series";
    std::filesystem::remove_all(dir);
    const auto files = write_series_files(dir, sweep, {{"tool_version", kToolVersion}});
    REQUIRE(files.size() == 2);
    CHECK(files[0].filename() == "C_vs_gamma_pi1_0.1.csv");
    auto sidecar = files[0];
    sidecar.replace_extension(".json");
    std::ifstream meta(sidecar);
    const auto j = nlohmann::json::parse(meta);
    CHECK(j["kind"] == "C_vs_gamma");
    CHECK(j["provenance"]["tool_version"] == kToolVersion);
    CHECK(j["points"] == 19);
    std::filesystem::remove_all(dir);
}

TEST_CASE("parsers") {
    const auto grid = parse_grid("0.05:0.05:0.95");
    REQUIRE(grid.size() == 19);
    CHECK(grid[0] == 0.05);
    CHECK(grid[6] == 0.35);
    CHECK(grid.back() == 0.95);
    CHECK(parse_grid("0.1:0.05:0.9").size() == 17);
    CHECK_THROWS_AS(parse_grid("0.1:0:0.9"), DomainError);
    CHECK_THROWS_AS(parse_grid("0.1,0.9"), DomainError);

    const auto reals = parse_real_list("0.1, 4/13,0.65");
    REQUIRE(reals.size() == 3);
    CHECK(reals[1] == 4.0 / 13.0);
    CHECK_THROWS_AS(parse_real_list("1/0"), DomainError);
    CHECK_THROWS_AS(parse_real_list("abc"), DomainError);

    CHECK(parse_int_list("3,5,7") == std::vector<int>{3, 5, 7});
    CHECK_THROWS_AS(parse_int_list("3,x"), DomainError);

    const auto pairs = parse_pairs("1,9;2,8;3,7;4,6");
    REQUIRE(pairs.size() == 4);
    CHECK(pairs[3] == std::pair<int, int>{4, 6});
    CHECK_THROWS_AS(parse_pairs("1,9;2"), DomainError);
}
