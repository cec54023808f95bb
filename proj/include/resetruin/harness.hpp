#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "resetruin/core.hpp"
#include "resetruin/montecarlo.hpp"

namespace resetruin {

inline constexpr const char* kToolVersion = "0.1.0";

/// Stand-in for gamma = 0 (no resetting), which the model excludes.
inline constexpr double kClassicalProxyGamma = 1e-8;

inline constexpr double kBisectionGammaLo = 0.05;
inline constexpr double kBisectionGammaHi = 0.95;
inline constexpr double kVerificationGamma = 0.5;
inline constexpr double kDegenerateRowTolerance = 5e-7;
/// 99th percentile of chi-square with 9 degrees of freedom.
inline constexpr double kChiSquare99Nine = 21.67;
inline constexpr double kSigmaBound = 4.0;

enum class BisectionObjective {
    end_to_end,  ///< C(pi, 0.95) - C(pi, 0.05)
    slope_at_half,  ///< central difference of C at gamma = 0.5
};

/**
 * Bisect the weight on pair.first for a two-site symmetric pair until the
 * bracket is narrower than tol. Throws DegenerateError for the unbiased
 * walk and NoSignChangeError when the objective keeps its sign.
 */
double bisect_critical_weight(const WalkSpec& walk, std::pair<int, int> pair, double tol = 1e-10,
                              BisectionObjective objective = BisectionObjective::end_to_end);

struct VerificationRow {
    int a = 0;
    double p = 0.0;
    std::vector<int> sites;
    double pi_star_theory = 0.0;
    std::optional<double> pi_star_bisected;
    std::optional<double> pi_error;
    double C_star_theory = 0.0;
    double C_star_measured = 0.0;
    double abs_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool degenerate = false;
};

struct VerificationCase {
    int a;
    double p;
    std::vector<int> sites;
};

/// The eight reference configurations of the exact verification table.
std::vector<VerificationCase> table1_cases();

std::vector<VerificationRow> table1_report(double tol = 1e-9,
                                           BisectionObjective objective = BisectionObjective::end_to_end);

struct McCase {
    std::string label;
    int a;
    double p;
    std::vector<int> sites;
    double neutral_weight = 0.0;
};

struct McRow {
    McCase config;
    ResetSpec reset;
    double C_star_theory = 0.0;
    McEstimate estimate;
    double deviation = 0.0;  ///< |C_hat - C*|
    double sigmas = 0.0;     ///< deviation / std_error
    bool pass = false;
};

struct McReport {
    std::vector<McRow> rows;
    double chi2 = 0.0;
    bool chi2_pass = false;
    bool pass = false;
};

/// The nine Monte Carlo validation configurations (gamma = 0.5, pi = pi*).
std::vector<McCase> table2_cases();

McReport table2_report(std::int64_t n, std::uint64_t seed, const SimulationOptions& options = {});

enum class SeriesKind { C_vs_gamma, q_vs_z, Cstar_vs_p };

std::string to_string(SeriesKind kind);

struct SweepSeries {
    SeriesKind kind = SeriesKind::C_vs_gamma;
    std::string label;
    std::string x_name;
    std::string y_name;
    nlohmann::json parameters;
    std::vector<std::pair<double, double>> points;
};

/// C(pi, gamma) over the grid for pi = (pi1, 1 - pi1) on two sites.
std::vector<SweepSeries> sweep_C_vs_gamma(const WalkSpec& walk, std::span<const int> sites,
                                          std::span<const double> pi1_list,
                                          std::span<const double> gamma_grid);

/// q_z(gamma) over interior z, one series per gamma; gamma = 0 is evaluated
/// at kClassicalProxyGamma.
std::vector<SweepSeries> profile_q_vs_z(const WalkSpec& walk, const ResetSpec& reset,
                                        std::span<const double> gamma_list);

/// C(pi*(p), 0.5) over the bias grid, one series per symmetric pair.
std::vector<SweepSeries> universality_Cstar_vs_p(int a, std::span<const double> p_grid,
                                                 std::span<const std::pair<int, int>> site_pairs);

/// "LO:STEP:HI" inclusive grid, values rounded to 12 decimals.
std::vector<double> parse_grid(const std::string& text);

/// Comma-separated reals; each entry may be a fraction "n/d".
std::vector<double> parse_real_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);
/// "1,9;2,8" -> {(1,9), (2,8)}.
std::vector<std::pair<int, int>> parse_pairs(const std::string& text);

void write_series_csv(std::ostream& out, const SweepSeries& series);
SweepSeries read_series_csv(std::istream& in, SeriesKind kind);

nlohmann::json series_metadata(const SweepSeries& series, const nlohmann::json& provenance);

/// Writes <stem>.csv and <stem>.json for every series under dir; returns the
/// CSV paths in input order.
std::vector<std::filesystem::path> write_series_files(const std::filesystem::path& dir,
                                                      std::span<const SweepSeries> series,
                                                      const nlohmann::json& provenance);

nlohmann::json to_json(const VerificationRow& row);
nlohmann::json to_json(const McEstimate& est);
nlohmann::json to_json(const McReport& report);

}  // namespace resetruin
