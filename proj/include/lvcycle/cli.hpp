#pragma once

// Command-line front end. Every subcommand reads flat `key = value` settings
// from an optional --config file, lets --key flags override them, validates
// all settings, runs the corresponding library operation and writes a table
// as CSV (default) or JSON.
//
// Exit codes: 0 success, 1 domain/config/usage error, 2 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lvcycle/dynamics.hpp"
#include "lvcycle/errors.hpp"
#include "lvcycle/estimation.hpp"
#include "lvcycle/io.hpp"
#include "lvcycle/model.hpp"
#include "lvcycle/observables.hpp"
#include "lvcycle/response.hpp"

namespace lvcycle::cli {

/// Environment variable naming the directory for relative output paths.
inline constexpr const char* output_dir_env = "LVCYCLE_OUTPUT_DIR";

struct KeySpec {
    std::string name;
    std::string help;
    bool repeatable = false;
};

class Settings {
public:
    void set(const std::string& key, std::vector<std::string> values) { values_[key] = std::move(values); }

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) > 0; }

    [[nodiscard]] std::vector<std::string> all(const std::string& key) const {
        const auto it = values_.find(key);
        return it == values_.end() ? std::vector<std::string>{} : it->second;
    }

    [[nodiscard]] std::optional<std::string> text(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        if (it->second.size() != 1) {
            throw ConfigError("key '" + key + "' given more than once");
        }
        return it->second.front();
    }

    [[nodiscard]] std::string text(const std::string& key, const std::string& fallback) const {
        return text(key).value_or(fallback);
    }

    [[nodiscard]] std::optional<double> number(const std::string& key) const {
        const auto t = text(key);
        if (!t) return std::nullopt;
        double x = 0.0;
        if (!parse_double(*t, x) || !std::isfinite(x)) {
            throw ConfigError("key '" + key + "': invalid number '" + *t + "'");
        }
        return x;
    }

    [[nodiscard]] double number(const std::string& key, double fallback) const {
        return number(key).value_or(fallback);
    }

    [[nodiscard]] std::optional<long long> integer(const std::string& key) const {
        const auto t = text(key);
        if (!t) return std::nullopt;
        long long x = 0;
        if (!parse_int(*t, x)) {
            throw ConfigError("key '" + key + "': invalid integer '" + *t + "'");
        }
        return x;
    }

    [[nodiscard]] std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        for (const std::string& item : all(key)) {
            for (std::string_view part : split(item, ',')) {
                double x = 0.0;
                if (!parse_double(part, x) || !std::isfinite(x)) {
                    throw ConfigError("key '" + key + "': invalid number '" + std::string(trim(part)) + "'");
                }
                out.push_back(x);
            }
        }
        return out;
    }

    [[nodiscard]] bool flag(const std::string& key) const {
        const auto t = text(key);
        if (!t) return false;
        if (*t == "true" || *t == "1" || *t == "yes") return true;
        if (*t == "false" || *t == "0" || *t == "no") return false;
        throw ConfigError("key '" + key + "': expected true or false, got '" + *t + "'");
    }

private:
    std::map<std::string, std::vector<std::string>> values_;
};

struct Command {
    std::string name;
    std::string help;
    std::vector<KeySpec> keys;
    std::function<Table(const Settings&, std::ostream& err)> run;
};

namespace detail {

inline std::vector<KeySpec> model_keys() {
    return {{"tau", "time horizon for producers and consumers [yr]"},
            {"tau_p", "producer time horizon [yr]"},
            {"tau_q", "consumer time horizon [yr]"},
            {"p_bar", "equilibrium produced stock"}};
}

inline std::vector<KeySpec> ellipse_keys() {
    return {{"e_0", "employment centre [%]"},
            {"e_hat", "employment amplitude [pp]"},
            {"j_0", "inflation centre [% p.a.]"},
            {"j_hat", "inflation amplitude [% p.a.]"},
            {"ellipse_omega", "cycle angular frequency [rad/yr]"},
            {"phi", "inflation phase delay [rad]"},
            {"t_ref", "time of the employment minimum [yr]"}};
}

inline KeySpec shock_key(bool amplitude_required) {
    return {"shock",
            amplitude_required ? "label,target,onset,amplitude (repeatable)"
                               : "label,target,onset[,amplitude] (repeatable; amplitude is fitted)",
            true};
}

template <class... Lists>
std::vector<KeySpec> join(Lists... lists) {
    std::vector<KeySpec> out;
    (out.insert(out.end(), lists.begin(), lists.end()), ...);
    return out;
}

inline ModelParams model_params(const Settings& s) {
    const double tau = s.number("tau", 1.0);
    return make_params(s.number("tau_p", tau), s.number("tau_q", tau), s.number("p_bar", 1.0));
}

inline EllipseParams ellipse_params(const Settings& s) {
    EllipseParams p = default_ellipse();
    p.e_0 = s.number("e_0", p.e_0);
    p.e_hat = s.number("e_hat", p.e_hat);
    p.j_0 = s.number("j_0", p.j_0);
    p.j_hat = s.number("j_hat", p.j_hat);
    p.omega = s.number("ellipse_omega", p.omega);
    p.phi = s.number("phi", p.phi);
    p.t_ref = s.number("t_ref", p.t_ref);
    validate(p);
    return p;
}

inline std::vector<ShockEvent> shocks(const Settings& s, bool amplitude_required) {
    std::vector<ShockEvent> out;
    for (const std::string& text : s.all("shock")) out.push_back(parse_shock(text, amplitude_required));
    return out;
}

inline IntegrationSettings integration(const Settings& s) {
    IntegrationSettings is;
    const std::string method = s.text("method", "rk45");
    if (method == "rk45") {
        is.method = Method::rk45_adaptive;
    } else if (method == "rk4") {
        is.method = Method::rk4_fixed;
    } else {
        throw ConfigError("method must be rk45 or rk4, got '" + method + "'");
    }
    is.rtol = s.number("rtol", is.rtol);
    is.atol = s.number("atol", is.atol);
    if (!(is.rtol > 0.0) || !(is.atol > 0.0)) {
        throw ConfigError("rtol and atol must be positive");
    }
    return is;
}

inline double positive(const Settings& s, const std::string& key, double fallback) {
    const double x = s.number(key, fallback);
    if (!(x > 0.0)) throw ConfigError("key '" + key + "' must be positive");
    return x;
}

inline std::vector<double> uniform_grid(double start, double end, double dt) {
    if (!(dt > 0.0) || !(end >= start)) {
        throw ConfigError("grid needs dt > 0 and t_end >= t_start");
    }
    const auto n = static_cast<std::size_t>(std::floor((end - start) / dt + 1e-9));
    std::vector<double> grid;
    grid.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(start + static_cast<double>(i) * dt);
    return grid;
}

// --- subcommands -----------------------------------------------------------

inline Table run_simulate(const Settings& s, std::ostream& err) {
    const ModelParams params = model_params(s);
    const double u0 = s.number("u0", 0.01);
    const double v0 = s.number("v0", 0.0);
    const double t_end = positive(s, "t_end", 14.5);
    const double dt = positive(s, "dt", 0.01);
    const IntegrationSettings is = integration(s);
    const std::string model = s.text("model", "nonlinear");
    if (model != "nonlinear" && model != "linear") {
        throw ConfigError("model must be nonlinear or linear");
    }
    const State initial = from_deviation({u0, v0, 0.0}, params);

    Table t;
    t.columns = {"t", "p", "q", "u", "v"};
    if (model == "nonlinear") {
        const Trajectory traj = integrate_nonlinear(params, initial, t_end, dt, is);
        for (const std::string& w : traj.warnings) err << "warning: " << w << '\n';
        for (const Sample& x : traj.samples) {
            const Deviation d = to_deviation({x.x, x.y, x.t}, params);
            t.rows.push_back({x.t, x.x, x.y, d.u, d.v});
        }
    } else {
        const Trajectory traj = linear_trajectory(linearize(params), u0, v0, t_end, dt);
        for (const Sample& x : traj.samples) {
            t.rows.push_back({x.t, params.p_bar() * (1.0 + x.x), params.q_bar() * (1.0 + x.y), x.x, x.y});
        }
    }
    return t;
}

inline Table run_linearize(const Settings& s, std::ostream&) {
    const LinearSolution lin = linearize(model_params(s));
    Table t;
    t.columns = {"tau_p", "tau_q", "d", "omega_0", "omega_d", "T_0", "T_c"};
    t.rows.push_back({lin.tau_p, lin.tau_q, lin.d, lin.omega_0, lin.omega_d, lin.T_0, lin.T_c});
    return t;
}

inline Table run_freqresp(const Settings& s, std::ostream&) {
    const LinearSolution lin = linearize(model_params(s));
    std::vector<double> omegas = s.numbers("omega");
    if (omegas.empty()) {
        const double lo = s.number("omega_min", 0.0);
        const double hi = s.number("omega_max", 3.0 * lin.omega_0);
        const auto steps = s.integer("omega_steps").value_or(301);
        if (steps < 2 || !(hi > lo)) throw ConfigError("frequency grid needs omega_max > omega_min and omega_steps >= 2");
        for (long long i = 0; i < steps; ++i) {
            omegas.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1));
        }
    }
    for (double w : omegas) {
        if (!(w >= 0.0)) throw ConfigError("omega must be non-negative");
    }
    Table t;
    t.columns = {"omega", "re", "im", "magnitude", "phase"};
    for (double w : omegas) {
        const FrequencyResponse fr = frequency_response(lin, w);
        t.rows.push_back({w, fr.H.real(), fr.H.imag(), fr.magnitude, fr.phase});
    }
    return t;
}

inline Table run_ellipse(const Settings& s, std::ostream&) {
    const EllipseParams p = ellipse_params(s);
    Table t;
    if (s.flag("geometry")) {
        const EllipseGeometry g = ellipse_geometry(p);
        t.columns = {"semi_major", "semi_minor", "axis_angle", "circular", "degenerate",
                     "signed_area", "amplification"};
        t.rows.push_back({g.semi_major, g.semi_minor, g.axis_angle, g.circular, g.degenerate,
                          loop_signed_area(p), amplification(p)});
        return t;
    }
    std::vector<double> grid;
    if (s.has("t_end")) {
        grid = uniform_grid(s.number("t_start", p.t_ref), *s.number("t_end"), positive(s, "dt", 0.25));
    } else {
        const auto samples = s.integer("samples").value_or(361);
        if (samples < 2) throw ConfigError("samples must be at least 2");
        const double period = 2.0 * std::numbers::pi / p.omega;
        for (long long i = 0; i < samples; ++i) {
            grid.push_back(p.t_ref + period * static_cast<double>(i) / static_cast<double>(samples - 1));
        }
    }
    t.columns = {"t", "employment", "inflation"};
    for (double x : grid) {
        const EllipsePoint e = ellipse_point(p, x);
        t.rows.push_back({x, e.employment, e.inflation});
    }
    return t;
}

inline Table run_scenario(const Settings& s, std::ostream&) {
    const LinearSolution lin = linearize(model_params(s));
    const EllipseParams p = ellipse_params(s);
    const std::vector<ShockEvent> sh = shocks(s, true);
    const std::vector<double> grid =
        uniform_grid(s.number("t_start", 1966.0), s.number("t_end", 1999.0), positive(s, "dt", 0.25));
    Table t;
    t.columns = {"t", "employment", "inflation", "production_dev"};
    for (const ScenarioSample& x : scenario(lin, p, sh, grid)) {
        t.rows.push_back({x.t, x.employment, x.inflation, x.production_dev});
    }
    return t;
}

inline Table run_sweep(const Settings& s, std::ostream&) {
    const ModelParams params = model_params(s);
    const LinearSolution lin = linearize(params);
    std::vector<double> r_hats = s.numbers("r_hat");
    if (r_hats.empty()) r_hats = {1e-3, 1e-2, 1e-1, 0.3};
    std::vector<double> omegas = s.numbers("omega");
    if (omegas.empty()) omegas = {lin.omega_0};
    SweepSettings ss;
    ss.t_end = positive(s, "t_end", 200.0);
    ss.dt = positive(s, "dt", 0.01);
    ss.integration = integration(s);
    ss.spike_threshold = positive(s, "spike_threshold", 3.0);
    std::vector<ModulationSpec> specs;
    for (double w : omegas) {
        for (double r : r_hats) specs.push_back({r, w});
    }
    Table t;
    t.columns = {"r_hat", "omega", "peak_to_mean", "spike_count", "v_amplitude", "v_phase"};
    for (const SweepResult& r : modulation_sweep(params, specs, ss)) {
        t.rows.push_back({r.spec.r_hat, r.spec.omega, r.peak_to_mean,
                          static_cast<long long>(r.spike_count), r.v_amplitude, r.v_phase});
    }
    return t;
}

inline Table run_fit(const Settings& s, std::ostream& err) {
    const auto input = s.text("input");
    if (!input) throw ConfigError("fit needs an input series (--input)");
    FitOptions opt;
    opt.lin = linearize(model_params(s));
    const std::string omega = s.text("omega", "free");
    if (omega != "free") {
        opt.omega = s.number("omega");
        if (!(*opt.omega > 0.0)) throw ConfigError("omega must be positive or 'free'");
    }
    const std::string phi = s.text("phi", "fixed");
    if (phi == "free") {
        opt.free_phi = true;
    } else if (phi != "fixed") {
        opt.phi = *s.number("phi");
    }
    opt.sigma_e = positive(s, "sigma_e", 1.0);
    opt.sigma_j = positive(s, "sigma_j", 1.0);
    opt.omega_min = positive(s, "omega_min", opt.omega_min);
    opt.omega_max = positive(s, "omega_max", opt.omega_max);
    opt.shocks = shocks(s, false);
    const double tolerance = s.number("tolerance", 0.25);
    if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");

    const ObservationSeries series = ingest_csv(*input);
    for (const std::string& w : series.warnings) err << "warning: " << w << '\n';
    const FitResult fit = fit_ellipse(series, opt);

    std::vector<ShockEvent> fitted = opt.shocks;
    for (std::size_t k = 0; k < fitted.size(); ++k) fitted[k].amplitude = fit.shock_amplitudes[k];
    const CorrectionResult corr = shock_correct(series, opt.lin, fitted, fit.params, tolerance);

    Table t;
    t.columns = {"name", "value"};
    auto row = [&t](std::string name, Cell v) { t.rows.push_back({std::move(name), std::move(v)}); };
    row("e_0", fit.params.e_0);
    row("e_hat", fit.params.e_hat);
    row("j_0", fit.params.j_0);
    row("j_hat", fit.params.j_hat);
    row("omega", fit.params.omega);
    row("phi", fit.params.phi);
    row("t_ref", fit.params.t_ref);
    row("amplification", amplification(fit.params));
    row("rms_residual", fit.rms_residual);
    row("objective", fit.objective);
    row("converged", fit.converged);
    row("iterations", static_cast<long long>(fit.iterations));
    row("inside_ellipse_fraction", corr.inside_fraction);
    for (std::size_t k = 0; k < fitted.size(); ++k) {
        row("shock:" + fitted[k].label, fit.shock_amplitudes[k]);
    }
    return t;
}

inline Table run_gen_data(const Settings& s, std::ostream&) {
    SyntheticConfig cfg;
    cfg.lin = linearize(model_params(s));
    cfg.ellipse = ellipse_params(s);
    cfg.shocks = shocks(s, true);
    cfg.sigma = s.number("sigma", 0.0);
    if (!(cfg.sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
    const long long seed = s.integer("seed").value_or(1);
    if (seed < 0) throw ConfigError("seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.first_year = static_cast<int>(s.integer("first_year").value_or(1966));
    const long long years = s.integer("years").value_or(33);
    if (years < 1 || years > 100000) throw ConfigError("years must be positive");
    cfg.years = static_cast<int>(years);
    return observations_table(generate_synthetic(cfg));
}

inline Table run_accumulate(const Settings& s, std::ostream&) {
    Table t;
    t.columns = {"years", "factor", "mean_rate_pct_pa"};
    const auto years = s.integer("years");
    if (years && *years < 1) throw ConfigError("years must be positive");
    if (s.has("factor")) {
        if (s.has("rate")) throw ConfigError("give either rate or factor, not both");
        if (!years) throw ConfigError("factor needs years");
        const double factor = *s.number("factor");
        t.rows.push_back({*years, factor, mean_rate_from_factor(factor, static_cast<double>(*years))});
        return t;
    }
    std::vector<double> rates = s.numbers("rate");
    if (years) {
        if (rates.size() == 1) {
            rates.assign(static_cast<std::size_t>(*years), rates.front());
        } else if (rates.size() != static_cast<std::size_t>(*years)) {
            throw ConfigError("years does not match the number of rates");
        }
    }
    const Accumulation acc = accumulate_inflation(rates);
    t.rows.push_back({static_cast<long long>(acc.years), acc.factor,
                      acc.mean_rate ? Cell(*acc.mean_rate) : Cell(Missing{})});
    return t;
}

}  // namespace detail

inline std::vector<Command> commands() {
    using detail::join;
    using detail::model_keys;
    using detail::ellipse_keys;
    const std::vector<KeySpec> integ = {{"method", "rk45 (default) or rk4"},
                                        {"rtol", "rk45 relative tolerance"},
                                        {"atol", "rk45 absolute tolerance"}};
    return {
        {"simulate", "integrate the producer/consumer equations",
         join(model_keys(), integ,
              std::vector<KeySpec>{{"u0", "initial production deviation"},
                                   {"v0", "initial consumption deviation"},
                                   {"t_end", "end time [yr]"},
                                   {"dt", "sampling interval [yr]"},
                                   {"model", "nonlinear (default) or linear"}}),
         detail::run_simulate},
        {"linearize", "damping, frequencies and periods of the linearised cycle", model_keys(),
         detail::run_linearize},
        {"freqresp", "frequency response to a production modulation",
         join(model_keys(), std::vector<KeySpec>{{"omega", "angular frequencies (comma list)"},
                                                 {"omega_min", "grid start"},
                                                 {"omega_max", "grid end"},
                                                 {"omega_steps", "grid points"}}),
         detail::run_freqresp},
        {"ellipse", "employment/inflation ellipse points or geometry",
         join(ellipse_keys(), std::vector<KeySpec>{{"t_start", "grid start [yr]"},
                                                   {"t_end", "grid end [yr]"},
                                                   {"dt", "grid step [yr]"},
                                                   {"samples", "points over one period"},
                                                   {"geometry", "report principal axes instead"}}),
         detail::run_ellipse},
        {"scenario", "ellipse plus damped shock reactions",
         join(model_keys(), ellipse_keys(),
              std::vector<KeySpec>{detail::shock_key(true),
                                   {"t_start", "grid start [yr]"},
                                   {"t_end", "grid end [yr]"},
                                   {"dt", "grid step [yr]"}}),
         detail::run_scenario},
        {"sweep", "supply-modulation sweep of the nonlinear system",
         join(model_keys(), integ,
              std::vector<KeySpec>{{"r_hat", "modulation amplitudes (comma list)"},
                                   {"omega", "modulation frequencies (comma list)"},
                                   {"t_end", "integration end [yr]"},
                                   {"dt", "sampling interval [yr]"},
                                   {"spike_threshold", "spike threshold as multiple of the mean"}}),
         detail::run_sweep},
        {"fit", "fit the ellipse (and shock amplitudes) to an annual series",
         join(model_keys(),
              std::vector<KeySpec>{{"input", "observation CSV"},
                                   {"omega", "fixed angular frequency or 'free'"},
                                   {"phi", "fixed delay, 'fixed' (pi/4) or 'free'"},
                                   {"sigma_e", "employment weight"},
                                   {"sigma_j", "inflation weight"},
                                   {"omega_min", "search bracket start"},
                                   {"omega_max", "search bracket end"},
                                   {"tolerance", "radius tolerance for the inside-ellipse check"},
                                   detail::shock_key(false)}),
         detail::run_fit},
        {"gen-data", "synthetic annual series from the ellipse and shocks",
         join(model_keys(), ellipse_keys(),
              std::vector<KeySpec>{detail::shock_key(true),
                                   {"sigma", "Gaussian noise standard deviation"},
                                   {"seed", "random seed"},
                                   {"first_year", "first calendar year"},
                                   {"years", "number of annual samples"}}),
         detail::run_gen_data},
        {"accumulate", "accumulated inflation factor and mean rate",
         std::vector<KeySpec>{{"rate", "annual rates in % p.a. (comma list)"},
                              {"years", "number of years (repeats a single rate)"},
                              {"factor", "accumulated factor (inverse mode)"}},
         detail::run_accumulate},
    };
}

namespace detail {

inline std::string resolve_output(const std::string& path) {
    const char* dir = std::getenv(output_dir_env);
    if (dir && *dir && std::filesystem::path(path).is_relative()) {
        return (std::filesystem::path(dir) / path).string();
    }
    return path;
}

}  // namespace detail

/// Runs the CLI; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Producer/consumer business-cycle toolkit", "lvcycle"};
    app.require_subcommand(1);

    struct Bound {
        const Command* command = nullptr;
        CLI::App* app = nullptr;
        std::map<std::string, std::vector<std::string>> flags;
        std::string config;
        std::string format = "csv";
        std::string output;
    };
    const std::vector<Command> cmds = commands();
    std::vector<Bound> bound(cmds.size());
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        Bound& b = bound[i];
        b.command = &cmds[i];
        b.app = app.add_subcommand(cmds[i].name, cmds[i].help);
        b.app->add_option("--config", b.config, "key = value settings file");
        b.app->add_option("--format", b.format, "csv (default) or json");
        b.app->add_option("--output,-o", b.output, "output file (default: standard output)");
        for (const KeySpec& k : cmds[i].keys) {
            b.app->add_option("--" + k.name, b.flags[k.name], k.help)->allow_extra_args(false);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    for (Bound& b : bound) {
        if (!b.app->parsed()) continue;
        try {
            if (b.format != "csv" && b.format != "json") {
                throw ConfigError("format must be csv or json");
            }
            Settings settings;
            if (!b.config.empty()) {
                std::map<std::string, std::vector<std::string>> from_file;
                for (const ConfigEntry& e : load_config(b.config)) {
                    const auto spec = std::find_if(b.command->keys.begin(), b.command->keys.end(),
                                                   [&](const KeySpec& k) { return k.name == e.key; });
                    if (spec == b.command->keys.end()) {
                        throw ConfigError(b.config + ": line " + std::to_string(e.line) +
                                          ": unknown key '" + e.key + "' for " + b.command->name);
                    }
                    auto& vals = from_file[e.key];
                    if (!vals.empty() && !spec->repeatable) {
                        throw ConfigError(b.config + ": line " + std::to_string(e.line) +
                                          ": key '" + e.key + "' repeated");
                    }
                    vals.push_back(e.value);
                }
                for (auto& [k, v] : from_file) settings.set(k, std::move(v));
            }
            for (const auto& [k, v] : b.flags) {
                if (!v.empty()) settings.set(k, v);
            }

            std::ostringstream warnings;
            const Table table = b.command->run(settings, warnings);
            err << warnings.str();

            std::ostringstream buffer;
            if (b.format == "json") {
                write_json(buffer, table);
            } else {
                write_csv(buffer, table);
            }
            if (b.output.empty()) {
                out << buffer.str();
            } else {
                const std::string path = detail::resolve_output(b.output);
                std::ofstream file(path, std::ios::binary);
                if (!file) throw IoError("cannot write '" + path + "'");
                file << buffer.str();
                if (!file) throw IoError("failed writing '" + path + "'");
            }
            return 0;
        } catch (const IoError& e) {
            err << "error: " << e.what() << '\n';
            return 2;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return 1;
        }
    }
    err << app.help();
    return 1;
}

}  // namespace lvcycle::cli
