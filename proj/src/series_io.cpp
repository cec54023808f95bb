#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "resetruin/harness.hpp"

namespace resetruin {
namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            parts.push_back(item);
        }
    }
    return parts;
}

double parse_real(const std::string& token) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw DomainError("cannot parse number '" + token + "'");
    }
    if (used != token.size()) {
        throw DomainError("cannot parse number '" + token + "'");
    }
    return value;
}

int parse_int(const std::string& token) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw DomainError("cannot parse integer '" + token + "'");
    }
    return value;
}

double round12(double x) { return std::round(x * 1e12) / 1e12; }

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw DomainError("grid must look like LO:STEP:HI, got '" + text + "'");
    }
    const double lo = parse_real(parts[0]);
    const double step = parse_real(parts[1]);
    const double hi = parse_real(parts[2]);
    if (!(step > 0.0) || hi < lo) {
        throw DomainError("grid needs a positive step and LO <= HI");
    }
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (long k = 0; k < count; ++k) {
        grid.push_back(round12(lo + static_cast<double>(k) * step));
    }
    return grid;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> values;
    for (const auto& token : split(text, ',')) {
        const auto slash = token.find('/');
        if (slash == std::string::npos) {
            values.push_back(parse_real(token));
        } else {
            const double num = parse_real(trim(token.substr(0, slash)));
            const double den = parse_real(trim(token.substr(slash + 1)));
            if (den == 0.0) {
                throw DomainError("zero denominator in '" + token + "'");
            }
            values.push_back(num / den);
        }
    }
    return values;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    for (const auto& token : split(text, ',')) {
        values.push_back(parse_int(token));
    }
    return values;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& group : split(text, ';')) {
        const auto ints = parse_int_list(group);
        if (ints.size() != 2) {
            throw DomainError("each pair needs two sites, got '" + group + "'");
        }
        pairs.emplace_back(ints[0], ints[1]);
    }
    return pairs;
}

void write_series_csv(std::ostream& out, const SweepSeries& series) {
    out << series.x_name << ',' << series.y_name << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& [x, y] : series.points) {
        out << x << ',' << y << '\n';
    }
}

SweepSeries read_series_csv(std::istream& in, SeriesKind kind) {
    SweepSeries series;
    series.kind = kind;
    std::string line;
    if (!std::getline(in, line)) {
        throw DomainError("empty series file");
    }
    const auto header = split(line, ',');
    if (header.size() != 2) {
        throw DomainError("series header must name two columns");
    }
    series.x_name = header[0];
    series.y_name = header[1];
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != 2) {
            throw DomainError("malformed series row '" + line + "'");
        }
        series.points.emplace_back(parse_real(cells[0]), parse_real(cells[1]));
    }
    return series;
}

nlohmann::json series_metadata(const SweepSeries& series, const nlohmann::json& provenance) {
    return {{"kind", to_string(series.kind)},
            {"label", series.label},
            {"columns", {series.x_name, series.y_name}},
            {"points", series.points.size()},
            {"parameters", series.parameters},
            {"provenance", provenance}};
}

std::vector<std::filesystem::path> write_series_files(const std::filesystem::path& dir,
                                                      std::span<const SweepSeries> series,
                                                      const nlohmann::json& provenance) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& s : series) {
        const std::string stem = to_string(s.kind) + "_" + s.label;
        const auto csv_path = dir / (stem + ".csv");
        std::ofstream csv(csv_path);
        if (!csv) {
            throw std::runtime_error("cannot write " + csv_path.string());
        }
        write_series_csv(csv, s);
        std::ofstream meta(dir / (stem + ".json"));
        meta << series_metadata(s, provenance).dump(2) << '\n';
        written.push_back(csv_path);
    }
    return written;
}

nlohmann::json to_json(const VerificationRow& row) {
    nlohmann::json j = {{"a", row.a},
                        {"p", row.p},
                        {"sites", row.sites},
                        {"pi_star_theory", row.pi_star_theory},
                        {"C_star_theory", row.C_star_theory},
                        {"C_star_measured", row.C_star_measured},
                        {"abs_error", row.abs_error},
                        {"tolerance", row.tolerance},
                        {"pass", row.pass},
                        {"degenerate", row.degenerate}};
    j["pi_star_bisected"] = row.pi_star_bisected ? nlohmann::json(*row.pi_star_bisected) : nlohmann::json();
    j["pi_error"] = row.pi_error ? nlohmann::json(*row.pi_error) : nlohmann::json();
    return j;
}

nlohmann::json to_json(const McEstimate& est) {
    nlohmann::json q_hat = nlohmann::json::object();
    for (const auto& [site, q] : est.q_hat) {
        q_hat[std::to_string(site)] = q;
    }
    nlohmann::json tallies = nlohmann::json::array();
    for (const auto& t : est.tallies) {
        tallies.push_back({{"site", t.site},
                           {"ruins", t.ruins},
                           {"escapes", t.escapes},
                           {"mean_steps", static_cast<double>(t.steps) / static_cast<double>(est.n)},
                           {"mean_resets", static_cast<double>(t.resets) / static_cast<double>(est.n)}});
    }
    return {{"q_hat", q_hat}, {"C_hat", est.C_hat}, {"n", est.n},
            {"seed", est.seed}, {"stderr", est.std_error}, {"tallies", tallies}};
}

nlohmann::json to_json(const McReport& report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"config", r.config.label},
                        {"a", r.config.a},
                        {"p", r.config.p},
                        {"sites", r.reset.sites},
                        {"weights", r.reset.weights},
                        {"C_star_theory", r.C_star_theory},
                        {"C_hat", r.estimate.C_hat},
                        {"abs_deviation", r.deviation},
                        {"sigma", r.estimate.std_error},
                        {"deviation_in_sigma", r.sigmas},
                        {"pass", r.pass}});
    }
    return {{"rows", rows},
            {"chi2", report.chi2},
            {"chi2_threshold", kChiSquare99Nine},
            {"chi2_pass", report.chi2_pass},
            {"pass", report.pass}};
}

}  // namespace resetruin
