#pragma once

// Driven and shocked behaviour of the cycle: frequency response of the
// linearised oscillator to a production modulation, the resonant
// anticipation solution, damped shock reactions and their superposition on
// the employment/inflation ellipse, and supply-modulation sweeps of the full
// nonlinear system.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "lvcycle/dynamics.hpp"
#include "lvcycle/errors.hpp"
#include "lvcycle/model.hpp"
#include "lvcycle/observables.hpp"

namespace lvcycle {

struct FrequencyResponse {
    double omega = 0.0;
    std::complex<double> H;
    double magnitude = 0.0;
    double phase = 0.0;  ///< arg H in (-pi, pi]
};

/// Complex gain v_hat / r_hat for a production modulation r_hat e^{i omega t}:
///   H = 1 / (1 - omega^2/omega_0^2 + i omega / (tau_p omega_0^2))
/// which reduces to 1 / (1 - x^2 + i x), x = omega/omega_0, when tau_p = tau_q.
/// Negative omega is accepted and gives the conjugate.
[[nodiscard]] inline FrequencyResponse frequency_response(const LinearSolution& lin,
                                                          double omega) noexcept {
    const double w0sq = lin.omega_0 * lin.omega_0;
    const std::complex<double> denom(1.0 - omega * omega / w0sq, omega / (lin.tau_p * w0sq));
    FrequencyResponse r;
    r.omega = omega;
    r.H = 1.0 / denom;
    r.magnitude = std::abs(r.H);
    r.phase = std::arg(r.H);
    return r;
}

struct PeakResponse {
    double omega_peak = 0.0;
    double gain_peak = 1.0;
    double omega_peak_numeric = 0.0;
    double gain_peak_numeric = 1.0;
};

/// Maximum of |H|. With k = 1/(tau_p omega_0) the squared denominator is
/// (1 - y)^2 + k^2 y in y = (omega/omega_0)^2, minimised at y = 1 - k^2/2,
/// so omega_peak = omega_0 sqrt(1 - k^2/2) and gain = 1/sqrt(k^2 - k^4/4)
/// (omega_0/sqrt 2 and 2/sqrt 3 when tau_p = tau_q). For k^2 >= 2 the peak
/// sits at omega = 0 with unit gain.
///
/// The numeric fields come from a grid scan over [0, 3 omega_0] with step
/// `resolution` omega_0.
[[nodiscard]] inline PeakResponse peak_response(const LinearSolution& lin,
                                                double resolution = 1e-4) {
    if (!(resolution > 0.0)) {
        throw InvalidParameter("scan resolution must be positive");
    }
    const double k = 1.0 / (lin.tau_p * lin.omega_0);
    const double k2 = k * k;
    PeakResponse out;
    if (k2 < 2.0) {
        out.omega_peak = lin.omega_0 * std::sqrt(1.0 - 0.5 * k2);
        out.gain_peak = 1.0 / std::sqrt(k2 - 0.25 * k2 * k2);
    } else {
        out.omega_peak = 0.0;
        out.gain_peak = 1.0;
    }

    const auto steps = static_cast<std::size_t>(std::llround(3.0 / resolution));
    for (std::size_t i = 0; i <= steps; ++i) {
        const double w = static_cast<double>(i) * resolution * lin.omega_0;
        const double g = frequency_response(lin, w).magnitude;
        if (g > out.gain_peak_numeric || i == 0) {
            out.gain_peak_numeric = g;
            out.omega_peak_numeric = w;
        }
    }
    return out;
}

/// Steady state driven by r(t) = r_hat cos(omega_0 t): v = |H| r_hat
/// cos(omega_0 t + arg H) and u = tau_q dv/dt. For tau_p = tau_q, H = -i so
/// v = r_hat sin(omega_0 t) lags the drive by a quarter period and u is in
/// phase with it.
[[nodiscard]] inline Deviation resonant_steady_state(const LinearSolution& lin, double r_hat,
                                                     double t) {
    if (!(r_hat >= 0.0)) {
        throw InvalidParameter("modulation amplitude must be non-negative");
    }
    const FrequencyResponse fr = frequency_response(lin, lin.omega_0);
    const double arg = lin.omega_0 * t + fr.phase;
    const double amp = fr.magnitude * r_hat;
    return {-lin.tau_q * lin.omega_0 * amp * std::sin(arg), amp * std::cos(arg), t};
}

enum class ShockTarget { production, employment, inflation };

[[nodiscard]] inline std::string_view to_string(ShockTarget t) noexcept {
    switch (t) {
        case ShockTarget::production: return "production";
        case ShockTarget::employment: return "employment";
        case ShockTarget::inflation: return "inflation";
    }
    return "unknown";
}

[[nodiscard]] inline ShockTarget parse_shock_target(std::string_view s) {
    if (s == "production") return ShockTarget::production;
    if (s == "employment" || s == "employment-direct") return ShockTarget::employment;
    if (s == "inflation" || s == "inflation-direct") return ShockTarget::inflation;
    throw ConfigError("unknown shock target '" + std::string(s) + "'");
}

/// Abrupt external event. Amplitude is the instantaneous offset at onset:
/// a relative deviation for production, percentage points for the direct
/// employment and inflation channels.
struct ShockEvent {
    double t_onset = 0.0;
    ShockTarget target = ShockTarget::inflation;
    double amplitude = 0.0;
    std::string label;
};

/// Unit-amplitude damped reaction e^{-d s} cos(omega_d s), s = t - t_onset;
/// zero before onset.
[[nodiscard]] inline double shock_kernel(const LinearSolution& lin, double t_onset,
                                         double t) noexcept {
    if (t < t_onset) {
        return 0.0;
    }
    const double s = t - t_onset;
    return std::exp(-lin.d * s) * std::cos(lin.omega_d * s);
}

[[nodiscard]] inline double shock_response(const LinearSolution& lin, const ShockEvent& shock,
                                           double t) noexcept {
    return shock.amplitude * shock_kernel(lin, shock.t_onset, t);
}

struct ScenarioSample {
    double t = 0.0;
    double employment = 0.0;
    double inflation = 0.0;
    double production_dev = 0.0;
};

/// Ellipse baseline plus the sum of all shock reactions on their channels.
[[nodiscard]] inline std::vector<ScenarioSample> scenario(const LinearSolution& lin,
                                                          const EllipseParams& ellipse,
                                                          std::span<const ShockEvent> shocks,
                                                          std::span<const double> grid) {
    if (grid.empty()) {
        throw ConfigError("scenario grid is empty");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ConfigError("scenario grid must be strictly increasing");
        }
    }
    for (const ShockEvent& s : shocks) {
        if (!std::isfinite(s.amplitude)) {
            throw ConfigError("shock '" + s.label + "' has a non-finite amplitude");
        }
        if (s.t_onset < grid.front() || s.t_onset > grid.back()) {
            throw ConfigError("shock '" + s.label + "' onset " + std::to_string(s.t_onset) +
                              " lies outside the scenario window");
        }
    }
    std::vector<ScenarioSample> out;
    out.reserve(grid.size());
    for (double t : grid) {
        const EllipsePoint base = ellipse_point(ellipse, t);
        ScenarioSample s{t, base.employment, base.inflation, 0.0};
        for (const ShockEvent& shock : shocks) {
            const double offset = shock_response(lin, shock, t);
            switch (shock.target) {
                case ShockTarget::production: s.production_dev += offset; break;
                case ShockTarget::employment: s.employment += offset; break;
                case ShockTarget::inflation: s.inflation += offset; break;
            }
        }
        out.push_back(s);
    }
    return out;
}

struct ModulationSpec {
    double r_hat = 0.0;
    double omega = 0.0;
};

struct SweepSettings {
    double t_end = 200.0;
    double dt = 1e-2;
    IntegrationSettings integration;
    /// A spike is a local maximum of the consumption flow above this multiple
    /// of its time mean.
    double spike_threshold = 3.0;
};

struct SweepResult {
    ModulationSpec spec;
    double peak_to_mean = 1.0;
    int spike_count = 0;
    double v_amplitude = 0.0;  ///< fitted steady-state amplitude of v
    double v_phase = 0.0;      ///< phase of v relative to the cosine drive
};

/// Transient discarded before steady-state measurement: 5 / d = 10 tau_p.
[[nodiscard]] inline double sweep_transient(const ModelParams& params) noexcept {
    return 10.0 * params.tau_p();
}

namespace detail {

inline SweepResult sweep_one(const ModelParams& params, const ModulationSpec& spec,
                             const SweepSettings& settings) {
    const double flow = equilibrium_flow(params);
    const double p_bar = params.p_bar();
    const double q_bar = params.q_bar();
    auto rhs = [&](const Vec2& x, Vec2& dxdt, double t) {
        const double xp = x[0] / p_bar;
        const double yq = x[1] / q_bar;
        dxdt[0] = flow * (1.0 + spec.r_hat * std::cos(spec.omega * t) - xp * yq);
        dxdt[1] = flow * yq * (xp - 1.0);
    };
    const std::vector<Sample> samples =
        integrate_positive(rhs, {p_bar, q_bar}, settings.t_end, settings.dt, settings.integration);

    const double t_skip = sweep_transient(params);
    std::vector<double> consumption;
    std::vector<double> times;
    std::vector<double> v;
    for (const Sample& s : samples) {
        if (s.t >= t_skip) {
            times.push_back(s.t);
            consumption.push_back(market_flow(s.x, s.y, params));
            v.push_back(s.y / q_bar - 1.0);
        }
    }

    SweepResult result;
    result.spec = spec;
    double mean = 0.0;
    for (double c : consumption) mean += c;
    mean /= static_cast<double>(consumption.size());
    result.peak_to_mean = *std::max_element(consumption.begin(), consumption.end()) / mean;
    for (std::size_t i = 1; i + 1 < consumption.size(); ++i) {
        if (consumption[i] > consumption[i - 1] && consumption[i] >= consumption[i + 1] &&
            consumption[i] > settings.spike_threshold * mean) {
            ++result.spike_count;
        }
    }

    if (spec.omega > 0.0) {
        Eigen::MatrixXd design(static_cast<Eigen::Index>(v.size()), 3);
        Eigen::VectorXd rhs_v(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            design(r, 0) = 1.0;
            design(r, 1) = std::cos(spec.omega * times[i]);
            design(r, 2) = std::sin(spec.omega * times[i]);
            rhs_v(r) = v[i];
        }
        const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs_v);
        result.v_amplitude = std::hypot(coef(1), coef(2));
        result.v_phase = std::atan2(-coef(2), coef(1));
    } else {
        double vm = 0.0;
        for (double x : v) vm += x;
        result.v_amplitude = std::abs(vm / static_cast<double>(v.size()));
    }
    return result;
}

}  // namespace detail

/// Integrates the nonlinear system with the producer source p_bar/tau_p
/// modulated by (1 + r_hat cos(omega t)), starting from equilibrium, and
/// measures the consumption flow after the transient.
[[nodiscard]] inline std::vector<SweepResult> modulation_sweep(const ModelParams& params,
                                                               std::span<const ModulationSpec> specs,
                                                               const SweepSettings& settings = {}) {
    for (const ModulationSpec& s : specs) {
        if (!(s.r_hat >= 0.0) || !std::isfinite(s.r_hat)) {
            throw InvalidParameter("modulation amplitude must be non-negative");
        }
        if (!(s.omega >= 0.0) || !std::isfinite(s.omega)) {
            throw InvalidParameter("modulation frequency must be non-negative");
        }
    }
    if (!(settings.dt > 0.0)) {
        throw InvalidParameter("sweep dt must be positive");
    }
    if (!(settings.t_end > sweep_transient(params) + 2.0 * settings.dt)) {
        throw InvalidParameter("sweep t_end must exceed the discarded transient of " +
                               std::to_string(sweep_transient(params)) + " years");
    }
    if (!(settings.spike_threshold > 0.0)) {
        throw InvalidParameter("spike threshold must be positive");
    }
    std::vector<SweepResult> results;
    results.reserve(specs.size());
    for (const ModulationSpec& s : specs) {
        results.push_back(detail::sweep_one(params, s, settings));
    }
    return results;
}

}  // namespace lvcycle
