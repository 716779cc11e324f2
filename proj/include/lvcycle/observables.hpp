#pragma once

// Employment/inflation ellipse and the phase chain of the six cyclic
// observables.
//
//   e(t) = e_0 - e_hat cos(omega (t - t_ref))
//   j(t) = j_0 - j_hat cos(omega (t - t_ref) - phi)

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>

#include "lvcycle/dynamics.hpp"
#include "lvcycle/errors.hpp"
#include "lvcycle/model.hpp"

namespace lvcycle {

struct EllipseParams {
    double e_0 = 94.0;    ///< employment centre [% of full employment]
    double e_hat = 2.0;   ///< employment amplitude [percentage points]
    double j_0 = 4.0;     ///< inflation centre [% p.a.]
    double j_hat = 3.0;   ///< inflation amplitude [% p.a.]
    double omega = 0.0;   ///< [rad/yr]
    double phi = std::numbers::pi / 4.0;  ///< inflation delay [rad]
    double t_ref = 0.0;   ///< time of the employment minimum [calendar years]
};

inline void validate(const EllipseParams& p) {
    if (!(p.e_hat >= 0.0) || !(p.j_hat >= 0.0)) {
        throw InvalidParameter("ellipse amplitudes must be non-negative");
    }
    if (!(p.e_0 > 0.0) || !(p.e_0 <= 100.0)) {
        throw InvalidParameter("employment centre must lie in (0, 100]");
    }
    if (!(p.phi >= 0.0) || !(p.phi < std::numbers::pi)) {
        throw InvalidParameter("phase delay must lie in [0, pi)");
    }
    if (!(p.omega > 0.0) || !std::isfinite(p.omega)) {
        throw InvalidParameter("ellipse angular frequency must be positive");
    }
    if (!std::isfinite(p.t_ref) || !std::isfinite(p.e_0) || !std::isfinite(p.j_0)) {
        throw InvalidParameter("ellipse parameters must be finite");
    }
}

/// Ellipse of the US cycles: centred at 94 % employment and 4 % p.a.
/// inflation, amplitudes 2 and 3, inflation lagging by pi/4, and the damped
/// cycle frequency of the tau_p = tau_q = 1 yr system.
[[nodiscard]] inline EllipseParams default_ellipse() {
    EllipseParams p;
    p.omega = linearize(make_params(1.0, 1.0, 1.0)).omega_d;
    return p;
}

/// Collective amplification j_hat / e_hat.
[[nodiscard]] inline double amplification(const EllipseParams& p) noexcept {
    return p.j_hat / p.e_hat;
}

[[nodiscard]] inline double cycle_phase(const EllipseParams& p, double t) noexcept {
    return p.omega * (t - p.t_ref);
}

struct EllipsePoint {
    double employment = 0.0;
    double inflation = 0.0;
};

[[nodiscard]] inline EllipsePoint ellipse_point(const EllipseParams& p, double t) noexcept {
    const double theta = cycle_phase(p, t);
    return {p.e_0 - p.e_hat * std::cos(theta), p.j_0 - p.j_hat * std::cos(theta - p.phi)};
}

struct ObservableSample {
    double t = 0.0;
    double production_dev = 0.0;
    double consumption_dev = 0.0;
    double employment = 0.0;
    double output_dev = 0.0;
    double money_dev = 0.0;
    double inflation = 0.0;
};

/// Fixed phase delay of consumption behind production.
inline constexpr double consumption_lag = std::numbers::pi / 2.0;
/// Fixed phase delay of annual output, money supply and inflation.
inline constexpr double output_lag = std::numbers::pi / 4.0;

/// Evaluates all six observables at t for a production oscillation of
/// amplitude u_amp. Production and employment share the ellipse phase
/// (minimum at t_ref); consumption follows from dv/dt = u / tau_q, so its
/// amplitude is u_amp / (tau_q omega). Output and money carry amplitude u_amp.
[[nodiscard]] inline ObservableSample observable_chain(double u_amp, double t,
                                                       const LinearSolution& lin,
                                                       const EllipseParams& ellipse = default_ellipse()) {
    const double theta = cycle_phase(ellipse, t);
    const double v_amp = u_amp / (lin.tau_q * ellipse.omega);
    ObservableSample s;
    s.t = t;
    s.production_dev = -u_amp * std::cos(theta);
    s.consumption_dev = -v_amp * std::cos(theta - consumption_lag);
    s.output_dev = -u_amp * std::cos(theta - output_lag);
    s.money_dev = s.output_dev;
    const EllipsePoint ep = ellipse_point(ellipse, t);
    s.employment = ep.employment;
    s.inflation = ep.inflation;
    return s;
}

struct EllipseGeometry {
    double semi_major = 0.0;
    double semi_minor = 0.0;
    /// Direction of the major axis in the (employment, inflation) plane,
    /// radians in (-pi/2, pi/2]. Meaningless when `circular`.
    double axis_angle = 0.0;
    bool circular = false;
    bool degenerate = false;
};

/// Principal axes from the second-moment matrix of the curve over one period:
///   M = 1/2 [[e_hat^2, e_hat j_hat cos phi], [e_hat j_hat cos phi, j_hat^2]]
/// Semi-axis = sqrt(2 lambda) for each eigenvalue lambda.
[[nodiscard]] inline EllipseGeometry ellipse_geometry(const EllipseParams& p) {
    if (!(p.e_hat > 0.0) || !(p.j_hat > 0.0)) {
        throw InvalidParameter("ellipse geometry requires positive amplitudes");
    }
    const double a = 0.5 * p.e_hat * p.e_hat;
    const double c = 0.5 * p.j_hat * p.j_hat;
    const double b = 0.5 * p.e_hat * p.j_hat * std::cos(p.phi);
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    const double lambda_max = mean + radius;
    const double lambda_min = std::max(mean - radius, 0.0);

    constexpr double rel_eps = 1e-12;
    EllipseGeometry g;
    g.semi_major = std::sqrt(2.0 * lambda_max);
    g.semi_minor = std::sqrt(2.0 * lambda_min);
    g.circular = radius <= rel_eps * mean;
    g.degenerate = lambda_min <= rel_eps * lambda_max;
    g.axis_angle = g.circular ? 0.0 : 0.5 * std::atan2(2.0 * b, a - c);
    return g;
}

/// Closed-loop integral of e dj over one period: pi e_hat j_hat sin(phi).
/// Positive for phi in (0, pi): the loop is traversed counter-clockwise in
/// the (employment, inflation) plane.
[[nodiscard]] inline double loop_signed_area(const EllipseParams& p) noexcept {
    return std::numbers::pi * p.e_hat * p.j_hat * std::sin(p.phi);
}

struct Accumulation {
    double factor = 1.0;
    std::optional<double> mean_rate;  ///< % p.a.; empty for an empty sequence
    std::size_t years = 0;
};

[[nodiscard]] inline Accumulation accumulate_inflation(std::span<const double> rates) {
    Accumulation acc;
    acc.years = rates.size();
    for (double r : rates) {
        if (!(r > -100.0) || !std::isfinite(r)) {
            throw DomainError("annual rate must exceed -100 %, got " + std::to_string(r));
        }
        acc.factor *= 1.0 + r / 100.0;
    }
    if (!rates.empty()) {
        acc.mean_rate = 100.0 * (std::pow(acc.factor, 1.0 / static_cast<double>(rates.size())) - 1.0);
    }
    return acc;
}

/// Geometric mean rate [% p.a.] that accumulates to `factor` over `years`.
[[nodiscard]] inline double mean_rate_from_factor(double factor, double years) {
    if (!(factor > 0.0) || !(years > 0.0)) {
        throw DomainError("factor and years must be positive");
    }
    return 100.0 * (std::pow(factor, 1.0 / years) - 1.0);
}

/// Observed mean inflation minus the ellipse centre [% p.a.].
[[nodiscard]] inline double structural_residual(double data_mean_inflation,
                                                const EllipseParams& p) noexcept {
    return data_mean_inflation - p.j_0;
}

}  // namespace lvcycle
