#pragma once

// Flat-file interchange: observation CSV ingestion, synthetic series
// generation, the key = value configuration grammar and CSV/JSON table
// output at 17 significant digits.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lvcycle/errors.hpp"
#include "lvcycle/estimation.hpp"
#include "lvcycle/observables.hpp"
#include "lvcycle/response.hpp"

namespace lvcycle {

inline constexpr std::string_view header_unemployment = "year,unemployment_pct,inflation_pct_pa";
inline constexpr std::string_view header_employment = "year,employment_pct,inflation_pct_pa";

[[nodiscard]] inline std::string_view trim(std::string_view s) noexcept {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

[[nodiscard]] inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

/// Strict full-string numeric parse; returns false on trailing garbage.
[[nodiscard]] inline bool parse_double(std::string_view s, double& out) noexcept {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

[[nodiscard]] inline bool parse_int(std::string_view s, long long& out) noexcept {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

/// Reads an observation CSV. Accepts either header form; unemployment is
/// mapped to employment = 100 - unemployment. Rows are sorted by year (with a
/// warning when the input was unsorted); duplicate years are rejected.
[[nodiscard]] inline ObservationSeries parse_observations(std::istream& in,
                                                          const std::string& source) {
    ObservationSeries series;
    series.source = source;
    std::string line;
    std::size_t line_no = 0;
    bool unemployment_form = false;
    bool have_header = false;
    std::vector<std::size_t> line_of;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (!have_header) {
            if (text == header_unemployment) {
                unemployment_form = true;
            } else if (text != header_employment) {
                throw ParseError(line_no, "unrecognised header '" + std::string(text) +
                                              "'; expected '" + std::string(header_unemployment) +
                                              "' or '" + std::string(header_employment) + "'");
            }
            have_header = true;
            continue;
        }
        if (text.empty()) continue;

        const std::vector<std::string_view> fields = split(text, ',');
        if (fields.size() != 3) {
            throw ParseError(line_no, "expected 3 fields, got " + std::to_string(fields.size()));
        }
        long long year = 0;
        double level = 0.0;
        double inflation = 0.0;
        if (!parse_int(fields[0], year) || year < -100000 || year > 100000) {
            throw ParseError(line_no, "invalid year '" + std::string(trim(fields[0])) + "'");
        }
        if (!parse_double(fields[1], level) || !std::isfinite(level)) {
            throw ParseError(line_no, "invalid percentage '" + std::string(trim(fields[1])) + "'");
        }
        if (!parse_double(fields[2], inflation) || !std::isfinite(inflation)) {
            throw ParseError(line_no, "invalid inflation '" + std::string(trim(fields[2])) + "'");
        }
        double employment = level;
        if (unemployment_form) {
            if (!(level >= 0.0) || !(level < 100.0)) {
                throw ParseError(line_no, "unemployment out of range [0, 100)");
            }
            employment = 100.0 - level;
        } else if (!(level > 0.0) || !(level <= 100.0)) {
            throw ParseError(line_no, "employment out of range (0, 100]");
        }
        if (!(inflation > -100.0)) {
            throw ParseError(line_no, "inflation must exceed -100 %");
        }
        series.records.push_back({static_cast<int>(year), employment, inflation});
        line_of.push_back(line_no);
    }
    if (!have_header) {
        throw ParseError(1, "missing header");
    }

    std::vector<std::size_t> order(series.records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return series.records[a].year < series.records[b].year;
    });
    bool sorted = true;
    for (std::size_t i = 0; i < order.size(); ++i) sorted = sorted && order[i] == i;
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (series.records[order[i]].year == series.records[order[i - 1]].year) {
            throw ParseError(line_of[order[i]],
                             "duplicate year " + std::to_string(series.records[order[i]].year));
        }
    }
    if (!sorted) {
        std::vector<Observation> ordered;
        ordered.reserve(order.size());
        for (std::size_t i : order) ordered.push_back(series.records[i]);
        series.records = std::move(ordered);
        series.warnings.push_back("rows were not sorted by year; reordered");
    }
    return series;
}

[[nodiscard]] inline ObservationSeries ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    return parse_observations(in, path);
}

struct SyntheticConfig {
    EllipseParams ellipse = default_ellipse();
    std::vector<ShockEvent> shocks;
    LinearSolution lin = linearize(make_params(1.0, 1.0, 1.0));
    double sigma = 0.0;
    std::uint64_t seed = 1;
    int first_year = 1966;
    int years = 33;
};

/// Annual samples (at mid-year) of the ellipse-plus-shocks scenario with
/// independent Gaussian noise of standard deviation sigma on both channels.
/// Deterministic for a given seed.
[[nodiscard]] inline ObservationSeries generate_synthetic(const SyntheticConfig& cfg) {
    if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma)) {
        throw InvalidParameter("noise sigma must be non-negative");
    }
    if (cfg.years < 1) {
        throw InvalidParameter("at least one year is required");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(cfg.years));
    for (int k = 0; k < cfg.years; ++k) grid.push_back(observation_time(cfg.first_year + k));

    std::vector<ShockEvent> in_window;
    for (const ShockEvent& s : cfg.shocks) {
        if (s.t_onset <= grid.back()) in_window.push_back(s);
    }
    // Shocks before the first sample still act on it.
    const double start = std::min(grid.front(), [&] {
        double m = grid.front();
        for (const ShockEvent& s : in_window) m = std::min(m, s.t_onset);
        return m;
    }());
    std::vector<double> full_grid;
    if (start < grid.front()) full_grid.push_back(start);
    full_grid.insert(full_grid.end(), grid.begin(), grid.end());
    std::vector<ScenarioSample> samples = scenario(cfg.lin, cfg.ellipse, in_window, full_grid);
    if (start < grid.front()) samples.erase(samples.begin());

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    ObservationSeries series;
    series.source = "synthetic(seed=" + std::to_string(cfg.seed) + ")";
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double ne = noise(rng);
        const double nj = noise(rng);
        series.records.push_back({cfg.first_year + static_cast<int>(k),
                                  samples[k].employment + cfg.sigma * ne,
                                  samples[k].inflation + cfg.sigma * nj});
    }
    return series;
}

/// 17 significant digits, shortest exponent form when needed.
[[nodiscard]] inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

/// Empty cell (CSV) / null (JSON).
struct Missing {};
using Cell = std::variant<Missing, double, long long, bool, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string cell_csv(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Missing>) return "";
            else if constexpr (std::is_same_v<T, double>) return format_number(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return csv_escape(v);
        },
        c);
}

inline std::string cell_json(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Missing>) return "null";
            else if constexpr (std::is_same_v<T, double>) return std::isfinite(v) ? format_number(v) : "null";
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else return nlohmann::json(v).dump();
        },
        c);
}

}  // namespace detail

/// Headered, comma-separated, LF line endings.
inline void write_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << detail::csv_escape(table.columns[i]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << detail::cell_csv(row[i]);
        }
        out << '\n';
    }
}

/// Array of objects keyed by the CSV column names, same numeric formatting.
inline void write_json(std::ostream& out, const Table& table) {
    out << "[";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out << (r ? ",\n " : "\n ") << "{";
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            out << (i ? ", " : "") << nlohmann::json(table.columns[i]).dump() << ": "
                << detail::cell_json(table.rows[r][i]);
        }
        out << "}";
    }
    out << (table.rows.empty() ? "]\n" : "\n]\n");
}

[[nodiscard]] inline Table observations_table(const ObservationSeries& series) {
    Table t;
    t.columns = {"year", "employment_pct", "inflation_pct_pa"};
    for (const Observation& o : series.records) {
        t.rows.push_back({static_cast<long long>(o.year), o.employment, o.inflation});
    }
    return t;
}

// ---------------------------------------------------------------------------
// Configuration grammar:
//   line    := blank | comment | entry
//   comment := '#' anything
//   entry   := key '=' value [comment]
//   key     := [a-z0-9_-]+
// Values are trimmed and may be empty.
// ---------------------------------------------------------------------------

struct ConfigEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

[[nodiscard]] inline std::vector<ConfigEntry> parse_config(std::istream& in) {
    std::vector<ConfigEntry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(line_no, "expected 'key = value'");
        }
        const std::string_view key = trim(text.substr(0, eq));
        if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) {
                return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
            })) {
            throw ParseError(line_no, "invalid key '" + std::string(key) + "'");
        }
        entries.push_back({std::string(key), std::string(trim(text.substr(eq + 1))), line_no});
    }
    return entries;
}

[[nodiscard]] inline std::vector<ConfigEntry> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path + "'");
    }
    try {
        return parse_config(in);
    } catch (const ParseError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

/// Parses "label, target, onset[, amplitude]". A blank amplitude is only
/// accepted when `amplitude_required` is false (fits estimate it).
[[nodiscard]] inline ShockEvent parse_shock(std::string_view text, bool amplitude_required) {
    const std::vector<std::string_view> f = split(text, ',');
    if (f.size() < 3 || f.size() > 4) {
        throw ConfigError("shock '" + std::string(text) +
                          "' must read 'label, target, onset, amplitude'");
    }
    ShockEvent s;
    s.label = std::string(trim(f[0]));
    if (s.label.empty()) {
        throw ConfigError("shock label must not be empty");
    }
    s.target = parse_shock_target(trim(f[1]));
    if (!parse_double(f[2], s.t_onset) || !std::isfinite(s.t_onset)) {
        throw ConfigError("shock '" + s.label + "' has an invalid onset");
    }
    const std::string_view amp = f.size() == 4 ? trim(f[3]) : std::string_view{};
    if (amp.empty()) {
        if (amplitude_required) {
            throw ConfigError("shock '" + s.label + "' has no amplitude; set one explicitly");
        }
        s.amplitude = 0.0;
    } else if (!parse_double(amp, s.amplitude) || !std::isfinite(s.amplitude)) {
        throw ConfigError("shock '" + s.label + "' has an invalid amplitude");
    }
    return s;
}

}  // namespace lvcycle
