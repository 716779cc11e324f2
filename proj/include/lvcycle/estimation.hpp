#pragma once

// Parameter estimation against annual employment/inflation series: ellipse
// fits (closed-form harmonic regression, Levenberg-Marquardt refinement,
// golden-section search over the cycle frequency), envelope damping fits and
// shock correction.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lvcycle/dynamics.hpp"
#include "lvcycle/errors.hpp"
#include "lvcycle/observables.hpp"
#include "lvcycle/response.hpp"

namespace lvcycle {

struct Observation {
    int year = 0;
    double employment = 0.0;  ///< % of full employment
    double inflation = 0.0;   ///< % p.a.
};

struct ObservationSeries {
    std::vector<Observation> records;
    std::string source;
    std::vector<std::string> warnings;
};

/// Annual averages are placed at mid-year.
[[nodiscard]] inline double observation_time(int year) noexcept {
    return static_cast<double>(year) + 0.5;
}

inline void validate(const ObservationSeries& series) {
    for (std::size_t i = 0; i < series.records.size(); ++i) {
        const Observation& o = series.records[i];
        if (i > 0 && !(o.year > series.records[i - 1].year)) {
            throw InvalidParameter("observation years must be strictly increasing (year " +
                                   std::to_string(o.year) + ")");
        }
        if (!(o.employment > 0.0) || !(o.employment <= 100.0)) {
            throw InvalidParameter("employment must lie in (0, 100] (year " +
                                   std::to_string(o.year) + ")");
        }
        if (!std::isfinite(o.inflation)) {
            throw InvalidParameter("inflation must be finite (year " + std::to_string(o.year) + ")");
        }
    }
}

inline constexpr std::size_t min_points_fixed_omega = 6;
inline constexpr std::size_t min_points_free_omega = 8;

struct FitOptions {
    /// Fixed cycle frequency [rad/yr]; searched over [omega_min, omega_max] when empty.
    std::optional<double> omega;
    /// Diagnostics mode: estimate the inflation delay instead of holding it at `phi`.
    bool free_phi = false;
    double phi = std::numbers::pi / 4.0;
    double sigma_e = 1.0;
    double sigma_j = 1.0;
    double omega_min = 2.0 * std::numbers::pi / 12.0;
    double omega_max = 2.0 * std::numbers::pi / 4.0;
    int omega_scan_points = 64;
    /// Shocks whose amplitudes are estimated jointly; their amplitude fields
    /// are ignored. Only employment and inflation targets are observable.
    std::vector<ShockEvent> shocks;
    /// Supplies the damped shock kernel.
    LinearSolution lin = linearize(make_params(1.0, 1.0, 1.0));
    /// Convergence test on the largest cosine between a Jacobian column and
    /// the residual vector.
    double gradient_tolerance = 1e-6;
    int max_iterations = 200;
};

struct Residual {
    int year = 0;
    double employment = 0.0;  ///< normalised by sigma_e
    double inflation = 0.0;   ///< normalised by sigma_j
};

struct FitResult {
    EllipseParams params;
    std::vector<double> shock_amplitudes;
    double objective = 0.0;
    double rms_residual = 0.0;
    std::vector<Residual> residuals;
    bool converged = false;
    int iterations = 0;
};

/// Closed-form harmonic regression of each channel at fixed omega:
///   e(t) = e_0 + e_cos cos(w tau) + e_sin sin(w tau) + sum_k a_k kernel_k(t)
/// with tau = t - t_centre, and likewise for inflation.
struct HarmonicCoefficients {
    double omega = 0.0;
    double t_centre = 0.0;
    Eigen::VectorXd employment;  ///< [e_0, e_cos, e_sin, employment shocks...]
    Eigen::VectorXd inflation;   ///< [j_0, j_cos, j_sin, inflation shocks...]
};

namespace detail {

inline double centre_time(const ObservationSeries& series) {
    double sum = 0.0;
    for (const Observation& o : series.records) sum += observation_time(o.year);
    return sum / static_cast<double>(series.records.size());
}

inline std::vector<std::size_t> shocks_on(std::span<const ShockEvent> shocks, ShockTarget target) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < shocks.size(); ++k) {
        if (shocks[k].target == target) idx.push_back(k);
    }
    return idx;
}

inline void check_fit_shocks(std::span<const ShockEvent> shocks) {
    for (const ShockEvent& s : shocks) {
        if (s.target == ShockTarget::production) {
            throw ConfigError("shock '" + s.label +
                              "' targets production, which employment/inflation data cannot identify");
        }
    }
}

struct ChannelDesign {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

inline ChannelDesign channel_design(const ObservationSeries& series, double omega, double t_centre,
                                    std::span<const ShockEvent> shocks, const LinearSolution& lin,
                                    ShockTarget target) {
    const std::vector<std::size_t> idx = shocks_on(shocks, target);
    const auto n = static_cast<Eigen::Index>(series.records.size());
    ChannelDesign d{Eigen::MatrixXd(n, 3 + static_cast<Eigen::Index>(idx.size())),
                    Eigen::VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const Observation& o = series.records[static_cast<std::size_t>(i)];
        const double t = observation_time(o.year);
        const double tau = t - t_centre;
        d.x(i, 0) = 1.0;
        d.x(i, 1) = std::cos(omega * tau);
        d.x(i, 2) = std::sin(omega * tau);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            d.x(i, 3 + static_cast<Eigen::Index>(k)) = shock_kernel(lin, shocks[idx[k]].t_onset, t);
        }
        d.y(i) = target == ShockTarget::employment ? o.employment : o.inflation;
    }
    return d;
}

inline Eigen::VectorXd solve_qr(const ChannelDesign& d) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.x);
    qr.setThreshold(1e-10);
    if (qr.rank() < d.x.cols()) {
        throw RankDeficient("harmonic design is rank deficient (rank " + std::to_string(qr.rank()) +
                            " of " + std::to_string(d.x.cols()) +
                            "); sample times do not identify the cycle phase");
    }
    return qr.solve(d.y);
}

/// Normal equations X^T X b = X^T y by Gaussian elimination with partial
/// pivoting. Kept free of Eigen decompositions so it cross-checks solve_qr.
inline Eigen::VectorXd solve_normal(const ChannelDesign& d) {
    const auto n = static_cast<std::size_t>(d.x.rows());
    const auto m = static_cast<std::size_t>(d.x.cols());
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) *
                     d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
            }
            a[r][c] = s;
        }
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r)) *
                 d.y(static_cast<Eigen::Index>(i));
        }
        a[r][m] = s;
    }
    double scale = 0.0;
    for (std::size_t r = 0; r < m; ++r) scale = std::max(scale, std::abs(a[r][r]));
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) <= 1e-12 * scale) {
            throw RankDeficient("normal equations are singular");
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t r = col + 1; r < m; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= m; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Eigen::VectorXd b(static_cast<Eigen::Index>(m));
    for (std::size_t r = m; r-- > 0;) {
        double s = a[r][m];
        for (std::size_t c = r + 1; c < m; ++c) s -= a[r][c] * b(static_cast<Eigen::Index>(c));
        b(static_cast<Eigen::Index>(r)) = s / a[r][r];
    }
    return b;
}

inline double wrap_two_pi(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    return a < 0.0 ? a + two_pi : a;
}

inline double wrap_pi(double a) {
    a = wrap_two_pi(a);
    return a > std::numbers::pi ? a - 2.0 * std::numbers::pi : a;
}

/// Model evaluated in the centred parameterisation
///   e = e_0 - e_hat cos(w tau - alpha),  j = j_0 - j_hat cos(w tau - alpha - phi)
struct CentredModel {
    double e_0 = 0.0;
    double e_hat = 0.0;
    double j_0 = 0.0;
    double j_hat = 0.0;
    double alpha = 0.0;
    double phi = 0.0;
    double omega = 0.0;
    std::vector<double> shock_amplitudes;
};

/// Packs the free parameters: [e_0, e_hat, j_0, j_hat, alpha, (phi), (omega), shocks...].
struct ParameterLayout {
    bool free_phi = false;
    bool free_omega = false;
    std::size_t n_shocks = 0;

    [[nodiscard]] std::size_t phi_index() const { return 5; }
    [[nodiscard]] std::size_t omega_index() const { return 5 + (free_phi ? 1 : 0); }
    [[nodiscard]] std::size_t shock_index(std::size_t k) const {
        return 5 + (free_phi ? 1 : 0) + (free_omega ? 1 : 0) + k;
    }
    [[nodiscard]] std::size_t size() const { return shock_index(n_shocks); }

    [[nodiscard]] Eigen::VectorXd pack(const CentredModel& m) const {
        Eigen::VectorXd x(static_cast<Eigen::Index>(size()));
        x(0) = m.e_0;
        x(1) = m.e_hat;
        x(2) = m.j_0;
        x(3) = m.j_hat;
        x(4) = m.alpha;
        if (free_phi) x(static_cast<Eigen::Index>(phi_index())) = m.phi;
        if (free_omega) x(static_cast<Eigen::Index>(omega_index())) = m.omega;
        for (std::size_t k = 0; k < n_shocks; ++k) {
            x(static_cast<Eigen::Index>(shock_index(k))) = m.shock_amplitudes[k];
        }
        return x;
    }

    [[nodiscard]] CentredModel unpack(const Eigen::VectorXd& x, CentredModel base) const {
        base.e_0 = x(0);
        base.e_hat = x(1);
        base.j_0 = x(2);
        base.j_hat = x(3);
        base.alpha = x(4);
        if (free_phi) base.phi = x(static_cast<Eigen::Index>(phi_index()));
        if (free_omega) base.omega = x(static_cast<Eigen::Index>(omega_index()));
        for (std::size_t k = 0; k < n_shocks; ++k) {
            base.shock_amplitudes[k] = x(static_cast<Eigen::Index>(shock_index(k)));
        }
        return base;
    }
};

struct Problem {
    const ObservationSeries& series;
    const FitOptions& options;
    double t_centre;
};

/// Residual vector [employment residuals..., inflation residuals...] and,
/// when requested, its Jacobian with respect to the packed parameters.
inline Eigen::VectorXd residuals(const Problem& pr, const ParameterLayout& layout,
                                 const CentredModel& m, Eigen::MatrixXd* jac) {
    const auto n = static_cast<Eigen::Index>(pr.series.records.size());
    Eigen::VectorXd r(2 * n);
    if (jac) {
        jac->setZero(2 * n, static_cast<Eigen::Index>(layout.size()));
    }
    const double se = pr.options.sigma_e;
    const double sj = pr.options.sigma_j;
    const auto& shocks = pr.options.shocks;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Observation& o = pr.series.records[static_cast<std::size_t>(i)];
        const double t = observation_time(o.year);
        const double tau = t - pr.t_centre;
        const double psi_e = m.omega * tau - m.alpha;
        const double psi_j = psi_e - m.phi;
        double model_e = m.e_0 - m.e_hat * std::cos(psi_e);
        double model_j = m.j_0 - m.j_hat * std::cos(psi_j);
        for (std::size_t k = 0; k < shocks.size(); ++k) {
            const double kernel = shock_kernel(pr.options.lin, shocks[k].t_onset, t);
            if (shocks[k].target == ShockTarget::employment) {
                model_e += m.shock_amplitudes[k] * kernel;
                if (jac) (*jac)(i, static_cast<Eigen::Index>(layout.shock_index(k))) = -kernel / se;
            } else {
                model_j += m.shock_amplitudes[k] * kernel;
                if (jac) (*jac)(n + i, static_cast<Eigen::Index>(layout.shock_index(k))) = -kernel / sj;
            }
        }
        r(i) = (o.employment - model_e) / se;
        r(n + i) = (o.inflation - model_j) / sj;
        if (!jac) continue;
        const double se_sin = std::sin(psi_e);
        const double sj_sin = std::sin(psi_j);
        auto& J = *jac;
        J(i, 0) = -1.0 / se;
        J(i, 1) = std::cos(psi_e) / se;
        J(i, 4) = m.e_hat * se_sin / se;
        J(n + i, 2) = -1.0 / sj;
        J(n + i, 3) = std::cos(psi_j) / sj;
        J(n + i, 4) = m.j_hat * sj_sin / sj;
        if (layout.free_phi) {
            J(n + i, static_cast<Eigen::Index>(layout.phi_index())) = m.j_hat * sj_sin / sj;
        }
        if (layout.free_omega) {
            const auto w = static_cast<Eigen::Index>(layout.omega_index());
            J(i, w) = -m.e_hat * tau * se_sin / se;
            J(n + i, w) = -m.j_hat * tau * sj_sin / sj;
        }
    }
    return r;
}

struct LmOutcome {
    CentredModel model;
    double objective = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Largest cosine between a Jacobian column and the residual vector; zero at
/// a stationary point whatever the parameter scales. Residuals are in sigma
/// units, so an rms below 1e-10 counts as an exact fit (the cosine of pure
/// rounding noise is meaningless).
inline double scaled_gradient(const Eigen::MatrixXd& J, const Eigen::VectorXd& r,
                              const Eigen::VectorXd& g) {
    const double rn = r.norm();
    if (rn <= 1e-10 * std::sqrt(static_cast<double>(r.size()))) return 0.0;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < J.cols(); ++k) {
        const double cn = J.col(k).norm();
        if (cn > 0.0) worst = std::max(worst, std::abs(g(k)) / (cn * rn));
    }
    return worst;
}

inline LmOutcome levenberg_marquardt(const Problem& pr, const ParameterLayout& layout,
                                     CentredModel start) {
    Eigen::VectorXd x = layout.pack(start);
    Eigen::MatrixXd J;
    CentredModel m = start;
    Eigen::VectorXd r = residuals(pr, layout, m, &J);
    double f = r.squaredNorm();
    double lambda = 1e-3;
    LmOutcome out;
    for (int it = 0; it < pr.options.max_iterations; ++it) {
        const Eigen::VectorXd g = J.transpose() * r;
        if (scaled_gradient(J, r, g) <= pr.options.gradient_tolerance) {
            out.converged = true;
            break;
        }
        const Eigen::MatrixXd jtj = J.transpose() * J;
        bool accepted = false;
        while (lambda < 1e16) {
            Eigen::MatrixXd a = jtj;
            for (Eigen::Index k = 0; k < a.rows(); ++k) {
                a(k, k) += lambda * std::max(jtj(k, k), 1e-12);
            }
            const Eigen::VectorXd step = a.ldlt().solve(-g);
            const Eigen::VectorXd x_new = x + step;
            const CentredModel m_new = layout.unpack(x_new, m);
            const Eigen::VectorXd r_new = residuals(pr, layout, m_new, nullptr);
            const double f_new = r_new.squaredNorm();
            if (std::isfinite(f_new) && f_new <= f) {
                const bool stalled = step.norm() <= 1e-15 * (x.norm() + 1e-15);
                x = x_new;
                m = m_new;
                r = residuals(pr, layout, m, &J);
                f = f_new;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = !stalled;
                break;
            }
            lambda *= 10.0;
        }
        out.iterations = it + 1;
        if (!accepted) {
            out.converged = scaled_gradient(J, r, J.transpose() * r) <= pr.options.gradient_tolerance;
            break;
        }
    }
    out.model = m;
    out.objective = f;
    return out;
}

/// Starting point for the constrained fit from the unconstrained harmonic
/// regression.
inline CentredModel initial_model(const HarmonicCoefficients& h, const FitOptions& opt) {
    CentredModel m;
    m.omega = h.omega;
    m.phi = opt.phi;
    m.e_0 = h.employment(0);
    m.j_0 = h.inflation(0);
    const double a = h.employment(1), b = h.employment(2);
    const double c = h.inflation(1), s = h.inflation(2);
    m.e_hat = std::hypot(a, b);
    m.j_hat = std::hypot(c, s);
    const double alpha_e = std::atan2(-b, -a);
    const double alpha_j = std::atan2(-s, -c) - opt.phi;
    m.alpha = m.e_hat / opt.sigma_e >= m.j_hat / opt.sigma_j ? alpha_e : alpha_j;
    if (opt.free_phi) {
        m.alpha = alpha_e;
        m.phi = wrap_pi(std::atan2(-s, -c) - alpha_e);
    }
    m.shock_amplitudes.assign(opt.shocks.size(), 0.0);
    std::size_t ie = 0, ij = 0;
    for (std::size_t k = 0; k < opt.shocks.size(); ++k) {
        if (opt.shocks[k].target == ShockTarget::employment) {
            m.shock_amplitudes[k] = h.employment(3 + static_cast<Eigen::Index>(ie++));
        } else {
            m.shock_amplitudes[k] = h.inflation(3 + static_cast<Eigen::Index>(ij++));
        }
    }
    return m;
}

inline FitResult finish(const Problem& pr, CentredModel m, const LmOutcome& lm) {
    if (m.e_hat < 0.0) {
        m.e_hat = -m.e_hat;
        m.j_hat = -m.j_hat;
        m.alpha += std::numbers::pi;
    }
    if (pr.options.free_phi) {
        if (m.j_hat < 0.0) {
            m.j_hat = -m.j_hat;
            m.phi += std::numbers::pi;
        }
        // Diagnostics mode reports the delay in (-pi, pi]; a value outside
        // [0, pi) means the data contradict the assumed lag direction.
        m.phi = wrap_pi(m.phi);
    }
    m.alpha = wrap_two_pi(m.alpha);

    FitResult res;
    res.params.e_0 = m.e_0;
    res.params.e_hat = m.e_hat;
    res.params.j_0 = m.j_0;
    res.params.j_hat = m.j_hat;
    res.params.omega = m.omega;
    res.params.phi = m.phi;
    const double period = 2.0 * std::numbers::pi / m.omega;
    double t_ref = pr.t_centre + m.alpha / m.omega;
    if (t_ref >= pr.t_centre + 0.5 * period) t_ref -= period;
    res.params.t_ref = t_ref;
    res.shock_amplitudes = m.shock_amplitudes;
    res.objective = lm.objective;
    res.converged = lm.converged;
    res.iterations = lm.iterations;

    const ParameterLayout layout{false, false, pr.options.shocks.size()};
    const Eigen::VectorXd r = residuals(pr, layout, m, nullptr);
    const auto n = static_cast<Eigen::Index>(pr.series.records.size());
    res.objective = r.squaredNorm();
    res.rms_residual = std::sqrt(res.objective / static_cast<double>(2 * n));
    res.residuals.reserve(pr.series.records.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        res.residuals.push_back({pr.series.records[static_cast<std::size_t>(i)].year, r(i), r(n + i)});
    }
    return res;
}

}  // namespace detail

/// Unconstrained per-channel harmonic regression at fixed omega (QR route).
[[nodiscard]] inline HarmonicCoefficients harmonic_least_squares(const ObservationSeries& series,
                                                                 double omega,
                                                                 const FitOptions& options = {}) {
    detail::check_fit_shocks(options.shocks);
    HarmonicCoefficients h;
    h.omega = omega;
    h.t_centre = detail::centre_time(series);
    h.employment = detail::solve_qr(detail::channel_design(series, omega, h.t_centre, options.shocks,
                                                           options.lin, ShockTarget::employment));
    h.inflation = detail::solve_qr(detail::channel_design(series, omega, h.t_centre, options.shocks,
                                                          options.lin, ShockTarget::inflation));
    return h;
}

/// Same regression through the normal equations; an independent route for
/// cross-checking harmonic_least_squares.
[[nodiscard]] inline HarmonicCoefficients harmonic_least_squares_normal(
    const ObservationSeries& series, double omega, const FitOptions& options = {}) {
    detail::check_fit_shocks(options.shocks);
    HarmonicCoefficients h;
    h.omega = omega;
    h.t_centre = detail::centre_time(series);
    h.employment = detail::solve_normal(detail::channel_design(
        series, omega, h.t_centre, options.shocks, options.lin, ShockTarget::employment));
    h.inflation = detail::solve_normal(detail::channel_design(
        series, omega, h.t_centre, options.shocks, options.lin, ShockTarget::inflation));
    return h;
}

/// Weighted sum of squared residuals of the ellipse-plus-shocks model.
[[nodiscard]] inline double fit_objective(const ObservationSeries& series,
                                          const EllipseParams& params,
                                          std::span<const double> shock_amplitudes,
                                          const FitOptions& options = {}) {
    if (shock_amplitudes.size() != options.shocks.size()) {
        throw InvalidParameter("one amplitude per fitted shock is required");
    }
    double f = 0.0;
    for (const Observation& o : series.records) {
        const double t = observation_time(o.year);
        EllipsePoint p = ellipse_point(params, t);
        for (std::size_t k = 0; k < options.shocks.size(); ++k) {
            const double off = shock_amplitudes[k] * shock_kernel(options.lin, options.shocks[k].t_onset, t);
            if (options.shocks[k].target == ShockTarget::employment) {
                p.employment += off;
            } else {
                p.inflation += off;
            }
        }
        const double re = (o.employment - p.employment) / options.sigma_e;
        const double rj = (o.inflation - p.inflation) / options.sigma_j;
        f += re * re + rj * rj;
    }
    return f;
}

namespace detail {

inline FitResult fit_fixed_omega(const ObservationSeries& series, const FitOptions& options,
                                 double omega) {
    const HarmonicCoefficients h = harmonic_least_squares(series, omega, options);
    const Problem pr{series, options, h.t_centre};
    const CentredModel start = initial_model(h, options);
    const ParameterLayout layout{options.free_phi, false, options.shocks.size()};
    // With phi free the regression already is the optimum and the LM pass only
    // confirms the gradient.
    const LmOutcome lm = levenberg_marquardt(pr, layout, start);
    return finish(pr, lm.model, lm);
}

}  // namespace detail

/// Fits the ellipse (and optional shock amplitudes) to an annual series.
///
/// Fixed omega: harmonic regression, refined by Levenberg-Marquardt when phi
/// is held fixed (the shared phase makes that problem nonlinear).
/// Free omega: coarse scan of the profile objective over the bracket,
/// golden-section refinement inside the best cell, then a joint polish with
/// omega as a free parameter.
[[nodiscard]] inline FitResult fit_ellipse(const ObservationSeries& series,
                                           const FitOptions& options = {}) {
    validate(series);
    detail::check_fit_shocks(options.shocks);
    if (!(options.sigma_e > 0.0) || !(options.sigma_j > 0.0)) {
        throw InvalidParameter("channel weights must be positive");
    }
    const std::size_t n = series.records.size();
    if (options.omega) {
        if (n < min_points_fixed_omega) {
            throw InsufficientData("fit needs at least " + std::to_string(min_points_fixed_omega) +
                                   " observations, got " + std::to_string(n));
        }
        if (!(*options.omega > 0.0)) {
            throw InvalidParameter("fixed omega must be positive");
        }
        return detail::fit_fixed_omega(series, options, *options.omega);
    }

    if (n < min_points_free_omega) {
        throw InsufficientData("free-omega fit needs at least " +
                               std::to_string(min_points_free_omega) + " observations, got " +
                               std::to_string(n));
    }
    if (!(options.omega_min > 0.0) || !(options.omega_max > options.omega_min) ||
        options.omega_scan_points < 3) {
        throw InvalidParameter("invalid omega search bracket");
    }

    auto profile = [&](double w) {
        try {
            return detail::fit_fixed_omega(series, options, w).objective;
        } catch (const RankDeficient&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    const int m = options.omega_scan_points;
    const double step = (options.omega_max - options.omega_min) / (m - 1);
    int best = 0;
    double best_f = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
        const double f = profile(options.omega_min + i * step);
        if (f < best_f) {
            best_f = f;
            best = i;
        }
    }
    if (!std::isfinite(best_f)) {
        throw RankDeficient("no frequency in the search bracket identifies the cycle");
    }

    double lo = options.omega_min + std::max(best - 1, 0) * step;
    double hi = options.omega_min + std::min(best + 1, m - 1) * step;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = profile(x1);
    double f2 = profile(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = profile(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = profile(x2);
        }
    }
    const double omega_golden = 0.5 * (lo + hi);

    const FitResult coarse = detail::fit_fixed_omega(series, options, omega_golden);
    const double t_centre = detail::centre_time(series);
    detail::CentredModel start;
    start.e_0 = coarse.params.e_0;
    start.e_hat = coarse.params.e_hat;
    start.j_0 = coarse.params.j_0;
    start.j_hat = coarse.params.j_hat;
    start.omega = omega_golden;
    start.phi = coarse.params.phi;
    start.alpha = omega_golden * (coarse.params.t_ref - t_centre);
    start.shock_amplitudes = coarse.shock_amplitudes;
    const detail::Problem pr{series, options, t_centre};
    const detail::ParameterLayout layout{options.free_phi, true, options.shocks.size()};
    const detail::LmOutcome lm = detail::levenberg_marquardt(pr, layout, start);
    FitResult polished = detail::finish(pr, lm.model, lm);
    if (!(polished.params.omega >= options.omega_min && polished.params.omega <= options.omega_max) ||
        polished.objective > coarse.objective) {
        return coarse;
    }
    return polished;
}

struct PeakSample {
    double t = 0.0;
    double amplitude = 0.0;
};

/// Local maxima of |values| (interior samples only).
[[nodiscard]] inline std::vector<PeakSample> abs_peaks(std::span<const double> times,
                                                       std::span<const double> values) {
    std::vector<PeakSample> peaks;
    for (std::size_t i = 1; i + 1 < values.size() && i < times.size(); ++i) {
        const double a = std::abs(values[i]);
        if (a > std::abs(values[i - 1]) && a >= std::abs(values[i + 1])) {
            peaks.push_back({times[i], a});
        }
    }
    return peaks;
}

/// Damping constant from the least-squares slope of ln|amplitude| against t.
[[nodiscard]] inline double fit_damping(std::span<const PeakSample> peaks) {
    if (peaks.size() < 2) {
        throw DomainError("damping fit needs at least two peaks");
    }
    double mt = 0.0, ml = 0.0;
    for (const PeakSample& p : peaks) {
        if (!(p.amplitude > 0.0)) {
            throw DomainError("peak amplitudes must be positive");
        }
        mt += p.t;
        ml += std::log(p.amplitude);
    }
    const double n = static_cast<double>(peaks.size());
    mt /= n;
    ml /= n;
    double sxy = 0.0, sxx = 0.0;
    for (const PeakSample& p : peaks) {
        sxy += (p.t - mt) * (std::log(p.amplitude) - ml);
        sxx += (p.t - mt) * (p.t - mt);
    }
    if (!(sxx > 0.0)) {
        throw DomainError("peak times must not all coincide");
    }
    return -sxy / sxx;
}

struct CorrectionResult {
    ObservationSeries corrected;
    std::vector<double> radii;  ///< normalised ellipse radius of each corrected point
    double inside_fraction = 1.0;
};

/// Normalised ellipse radius: 1 on the curve, 0 at the centre. With
/// x = (e - e_0)/e_hat = -cos(theta) and y = (j - j_0)/j_hat =
/// -cos(theta - phi), sin(theta) = (x cos phi - y)/sin phi.
[[nodiscard]] inline double ellipse_radius(const EllipseParams& p, double employment,
                                           double inflation) {
    const double x = (employment - p.e_0) / p.e_hat;
    const double y = (inflation - p.j_0) / p.j_hat;
    const double s = std::sin(p.phi);
    if (std::abs(s) < 1e-12) {
        return std::abs(x);
    }
    return std::hypot(x, (x * std::cos(p.phi) - y) / s);
}

/// Removes the damped shock reactions from each observation (shocks applied
/// one after another in list order) and reports the fraction of corrected
/// points within radius 1 + tolerance of the ellipse. Production shocks have
/// no observed channel and are skipped.
[[nodiscard]] inline CorrectionResult shock_correct(const ObservationSeries& series,
                                                    const LinearSolution& lin,
                                                    std::span<const ShockEvent> shocks,
                                                    const EllipseParams& ellipse,
                                                    double tolerance = 0.25) {
    // A negative amplitude (fixed-phi fit against contrary data) still defines
    // the curve; only a collapsed axis does not.
    if (!(ellipse.e_hat != 0.0) || !(ellipse.j_hat != 0.0)) {
        throw InvalidParameter("shock correction needs non-zero ellipse amplitudes");
    }
    CorrectionResult out;
    out.corrected = series;
    std::size_t inside = 0;
    for (Observation& o : out.corrected.records) {
        const double t = observation_time(o.year);
        for (const ShockEvent& s : shocks) {
            if (s.target == ShockTarget::employment) {
                o.employment -= shock_response(lin, s, t);
            } else if (s.target == ShockTarget::inflation) {
                o.inflation -= shock_response(lin, s, t);
            }
        }
        const double r = ellipse_radius(ellipse, o.employment, o.inflation);
        out.radii.push_back(r);
        if (r <= 1.0 + tolerance) ++inside;
    }
    if (!series.records.empty()) {
        out.inside_fraction =
            static_cast<double>(inside) / static_cast<double>(series.records.size());
    }
    return out;
}

}  // namespace lvcycle
