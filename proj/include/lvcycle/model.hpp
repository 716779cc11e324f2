#pragma once

// Producer/consumer rate equations and the mapping between absolute stocks
// and relative deviations from equilibrium.
//
//   dq/dt = p q / (p_bar tau_q) - q / tau_q          (consumers)
//   dp/dt = p_bar / tau_p - p q / (p_bar tau_q)      (producers)
//
// Equilibrium requires p_bar / tau_p = q_bar / tau_q, so q_bar is always
// derived from the other three parameters.

#include <cmath>
#include <string>

#include "lvcycle/errors.hpp"

namespace lvcycle {

class ModelParams;
ModelParams make_params(double tau_p, double tau_q, double p_bar);

/// Time horizons [years] and equilibrium stocks of the producer/consumer pair.
class ModelParams {
public:
    [[nodiscard]] double tau_p() const noexcept { return tau_p_; }
    [[nodiscard]] double tau_q() const noexcept { return tau_q_; }
    [[nodiscard]] double p_bar() const noexcept { return p_bar_; }
    [[nodiscard]] double q_bar() const noexcept { return q_bar_; }
    [[nodiscard]] double tau_min() const noexcept { return tau_p_ < tau_q_ ? tau_p_ : tau_q_; }

    friend ModelParams make_params(double tau_p, double tau_q, double p_bar);

private:
    ModelParams(double tau_p, double tau_q, double p_bar)
        : tau_p_(tau_p), tau_q_(tau_q), p_bar_(p_bar), q_bar_(p_bar * tau_q / tau_p) {}

    double tau_p_;
    double tau_q_;
    double p_bar_;
    double q_bar_;
};

inline ModelParams make_params(double tau_p, double tau_q, double p_bar) {
    auto check = [](double x, const char* name) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            throw InvalidParameter(std::string(name) + " must be positive and finite, got " +
                                   std::to_string(x));
        }
    };
    check(tau_p, "tau_p");
    check(tau_q, "tau_q");
    check(p_bar, "p_bar");
    return ModelParams(tau_p, tau_q, p_bar);
}

/// Absolute stocks at time t.
struct State {
    double p = 0.0;
    double q = 0.0;
    double t = 0.0;
};

/// Relative deviations p = p_bar (1 + u), q = q_bar (1 + v).
struct Deviation {
    double u = 0.0;
    double v = 0.0;
    double t = 0.0;
};

struct FlowRates {
    double dp_dt = 0.0;
    double dq_dt = 0.0;
};

inline void validate_state(const State& s) {
    if (!(s.p > 0.0) || !(s.q > 0.0)) {
        throw DomainError("stocks must be positive (p = " + std::to_string(s.p) +
                          ", q = " + std::to_string(s.q) + ")");
    }
}

[[nodiscard]] inline Deviation to_deviation(const State& s, const ModelParams& params) {
    return {s.p / params.p_bar() - 1.0, s.q / params.q_bar() - 1.0, s.t};
}

[[nodiscard]] inline State from_deviation(const Deviation& d, const ModelParams& params) {
    if (!(std::abs(d.u) < 1.0) || !(std::abs(d.v) < 1.0)) {
        throw DomainError("deviation magnitude must be below 1 (u = " + std::to_string(d.u) +
                          ", v = " + std::to_string(d.v) + ")");
    }
    return {params.p_bar() * (1.0 + d.u), params.q_bar() * (1.0 + d.v), d.t};
}

/// Equilibrium throughput p_bar / tau_p, identical to q_bar / tau_q.
[[nodiscard]] inline double equilibrium_flow(const ModelParams& params) noexcept {
    return params.p_bar() / params.tau_p();
}

/// Market term p q / (p_bar tau_q): the consumption flow.
///
/// Evaluated as F (p/p_bar)(q/q_bar) with F the equilibrium flow, which is the
/// same expression rearranged so the fixed point evaluates to zero exactly.
[[nodiscard]] inline double market_flow(double p, double q, const ModelParams& params) noexcept {
    return equilibrium_flow(params) * (p / params.p_bar()) * (q / params.q_bar());
}

[[nodiscard]] inline FlowRates flow_rates(const State& s, const ModelParams& params) noexcept {
    const double flow = equilibrium_flow(params);
    const double x = s.p / params.p_bar();
    const double y = s.q / params.q_bar();
    return {flow * (1.0 - x * y), flow * y * (x - 1.0)};
}

}  // namespace lvcycle
