#pragma once

// Linearised damped oscillator and numerical integration of the full
// nonlinear producer/consumer system.
//
// With p = p_bar (1 + u), q = q_bar (1 + v) and small amplitudes,
//   dv/dt = u / tau_q
//   v'' + v' / tau_p + v / (tau_p tau_q) = 0
// giving damping d = 1/(2 tau_p), omega_0 = 1/sqrt(tau_p tau_q) and the
// damped angular frequency omega_d = sqrt(omega_0^2 - d^2).

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "lvcycle/errors.hpp"
#include "lvcycle/model.hpp"

namespace lvcycle {

/// Damping, frequencies and periods of the linearised system, plus the
/// coefficients of v(t) = e^{-d t}(c_cos cos(omega_d t) + c_sin sin(omega_d t)).
struct LinearSolution {
    double tau_p = 1.0;
    double tau_q = 1.0;
    double d = 0.0;
    double omega_0 = 0.0;
    double omega_d = 0.0;
    double T_0 = 0.0;
    double T_c = 0.0;
    double c_cos = 0.0;
    double c_sin = 0.0;
};

/// Ratio tau_q / tau_p at which the oscillator becomes critically damped.
inline constexpr double critical_horizon_ratio = 4.0;

[[nodiscard]] inline LinearSolution linearize(const ModelParams& params) {
    const double ratio = params.tau_q() / params.tau_p();
    if (!(ratio < critical_horizon_ratio)) {
        throw OverdampedRegime(ratio, critical_horizon_ratio);
    }
    LinearSolution lin;
    lin.tau_p = params.tau_p();
    lin.tau_q = params.tau_q();
    lin.d = 1.0 / (2.0 * params.tau_p());
    lin.omega_0 = 1.0 / std::sqrt(params.tau_p() * params.tau_q());
    lin.omega_d = std::sqrt(lin.omega_0 * lin.omega_0 - lin.d * lin.d);
    lin.T_0 = 2.0 * std::numbers::pi / lin.omega_0;
    lin.T_c = 2.0 * std::numbers::pi / lin.omega_d;
    return lin;
}

/// Fixes c_cos, c_sin from v(0) = v0 and dv/dt(0) = u0 / tau_q.
[[nodiscard]] inline LinearSolution with_initial_conditions(LinearSolution lin, double u0,
                                                            double v0) noexcept {
    lin.c_cos = v0;
    lin.c_sin = (u0 / lin.tau_q + lin.d * v0) / lin.omega_d;
    return lin;
}

/// Evaluates the free damped oscillation stored in lin at time t.
[[nodiscard]] inline Deviation evaluate(const LinearSolution& lin, double t) noexcept {
    const double decay = std::exp(-lin.d * t);
    const double c = std::cos(lin.omega_d * t);
    const double s = std::sin(lin.omega_d * t);
    const double v = decay * (lin.c_cos * c + lin.c_sin * s);
    const double v_dot = decay * ((lin.omega_d * lin.c_sin - lin.d * lin.c_cos) * c -
                                  (lin.omega_d * lin.c_cos + lin.d * lin.c_sin) * s);
    return {lin.tau_q * v_dot, v, t};
}

[[nodiscard]] inline Deviation free_response(const LinearSolution& lin, double u0, double v0,
                                             double t) noexcept {
    if (t == 0.0) {
        return {u0, v0, 0.0};
    }
    return evaluate(with_initial_conditions(lin, u0, v0), t);
}

[[nodiscard]] inline double envelope(const LinearSolution& lin, double amplitude0,
                                     double t) noexcept {
    return amplitude0 * std::exp(-lin.d * t);
}

enum class Method { rk4_fixed, rk45_adaptive };

struct IntegrationSettings {
    Method method = Method::rk45_adaptive;
    double rtol = 1e-9;
    double atol = 1e-12;
};

enum class TrajectoryKind { nonlinear_numeric, linear_analytic };

/// Which pair the samples hold: absolute stocks (p, q) or deviations (u, v).
enum class Coordinates { levels, deviations };

struct Sample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct Trajectory {
    std::vector<Sample> samples;
    double dt = 0.0;
    TrajectoryKind kind = TrajectoryKind::nonlinear_numeric;
    Coordinates coords = Coordinates::levels;
    std::vector<std::string> warnings;
};

namespace detail {

using Vec2 = std::array<double, 2>;

inline std::size_t grid_steps(double t_end, double dt) {
    return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
}

inline bool positive(const Vec2& x) noexcept {
    return x[0] > 0.0 && x[1] > 0.0 && std::isfinite(x[0]) && std::isfinite(x[1]);
}

/// Integrates a positive two-component system onto the grid t_i = i dt.
/// Rhs follows the odeint system signature (const Vec2&, Vec2&, double).
template <class Rhs>
std::vector<Sample> integrate_positive(Rhs rhs, Vec2 x0, double t_end, double dt,
                                       const IntegrationSettings& settings) {
    namespace odeint = boost::numeric::odeint;
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw InvalidParameter("integration requires dt > 0 and t_end > 0");
    }
    if (!positive(x0)) {
        throw DomainError("initial stocks must be positive");
    }
    const std::size_t n = grid_steps(t_end, dt);
    std::vector<Sample> out;
    out.reserve(n + 1);
    out.push_back({0.0, x0[0], x0[1]});

    if (settings.method == Method::rk4_fixed) {
        odeint::runge_kutta4<Vec2> stepper;
        Vec2 x = x0;
        for (std::size_t i = 1; i <= n; ++i) {
            const double t = static_cast<double>(i - 1) * dt;
            stepper.do_step(rhs, x, t, dt);
            if (!positive(x)) {
                throw IntegrationBlowup(static_cast<double>(i) * dt);
            }
            out.push_back({static_cast<double>(i) * dt, x[0], x[1]});
        }
        return out;
    }

    if (!(settings.rtol > 0.0) || !(settings.atol > 0.0)) {
        throw InvalidParameter("rk45 tolerances must be positive");
    }
    auto stepper = odeint::make_dense_output(settings.atol, settings.rtol,
                                             odeint::runge_kutta_dopri5<Vec2>());
    stepper.initialize(x0, 0.0, std::min(dt, 1e-3));
    Vec2 x{};
    std::size_t i = 1;
    while (i <= n) {
        const double t = static_cast<double>(i) * dt;
        if (t <= stepper.current_time()) {
            stepper.calc_state(t, x);
            if (!positive(x)) {
                throw IntegrationBlowup(t);
            }
            out.push_back({t, x[0], x[1]});
            ++i;
        } else {
            stepper.do_step(rhs);
            if (!positive(stepper.current_state())) {
                throw IntegrationBlowup(stepper.current_time());
            }
        }
    }
    return out;
}

inline std::vector<std::string> step_warnings(const ModelParams& params, double dt) {
    std::vector<std::string> warnings;
    if (dt >= params.tau_min() / 10.0) {
        warnings.push_back("step-too-coarse: dt = " + std::to_string(dt) +
                           " is not below tau_min/10 = " + std::to_string(params.tau_min() / 10.0));
    }
    return warnings;
}

}  // namespace detail

/// Integrates the nonlinear rate equations from `initial` (taken at t = 0)
/// and samples (p, q) on a uniform grid of spacing dt up to t_end.
[[nodiscard]] inline Trajectory integrate_nonlinear(const ModelParams& params,
                                                    const State& initial, double t_end,
                                                    double dt,
                                                    const IntegrationSettings& settings = {}) {
    validate_state(initial);
    auto rhs = [&params](const detail::Vec2& x, detail::Vec2& dxdt, double) {
        const FlowRates f = flow_rates({x[0], x[1], 0.0}, params);
        dxdt[0] = f.dp_dt;
        dxdt[1] = f.dq_dt;
    };
    Trajectory traj;
    traj.warnings = detail::step_warnings(params, dt);
    traj.samples = detail::integrate_positive(rhs, {initial.p, initial.q}, t_end, dt, settings);
    traj.dt = dt;
    traj.kind = TrajectoryKind::nonlinear_numeric;
    traj.coords = Coordinates::levels;
    return traj;
}

/// Samples the analytic free oscillation in (u, v) on the same grid
/// convention as integrate_nonlinear.
[[nodiscard]] inline Trajectory linear_trajectory(const LinearSolution& lin, double u0, double v0,
                                                  double t_end, double dt) {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw InvalidParameter("sampling requires dt > 0 and t_end > 0");
    }
    const LinearSolution fixed = with_initial_conditions(lin, u0, v0);
    const std::size_t n = detail::grid_steps(t_end, dt);
    Trajectory traj;
    traj.samples.reserve(n + 1);
    traj.samples.push_back({0.0, u0, v0});
    for (std::size_t i = 1; i <= n; ++i) {
        const Deviation dev = evaluate(fixed, static_cast<double>(i) * dt);
        traj.samples.push_back({dev.t, dev.u, dev.v});
    }
    traj.dt = dt;
    traj.kind = TrajectoryKind::linear_analytic;
    traj.coords = Coordinates::deviations;
    return traj;
}

/// Converts a levels trajectory to (u, v); deviations pass through unchanged.
[[nodiscard]] inline Trajectory to_deviations(Trajectory traj, const ModelParams& params) {
    if (traj.coords == Coordinates::deviations) {
        return traj;
    }
    for (Sample& s : traj.samples) {
        const Deviation dev = to_deviation({s.x, s.y, s.t}, params);
        s.x = dev.u;
        s.y = dev.v;
    }
    traj.coords = Coordinates::deviations;
    return traj;
}

}  // namespace lvcycle
