#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lvcycle {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A value lies outside the domain where the model is defined
/// (non-positive stock, deviation magnitude >= 1, rate <= -100 %, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// tau_q >= 4 tau_p: the linearised oscillator has no oscillatory solution.
class OverdampedRegime : public Error {
public:
    OverdampedRegime(double ratio, double critical)
        : Error("overdamped regime: tau_q/tau_p = " + std::to_string(ratio) +
                " is not below the critical ratio " + std::to_string(critical)),
          ratio_(ratio), critical_(critical) {}

    [[nodiscard]] double ratio() const noexcept { return ratio_; }
    [[nodiscard]] double critical_ratio() const noexcept { return critical_; }

private:
    double ratio_;
    double critical_;
};

class IntegrationBlowup : public Error {
public:
    explicit IntegrationBlowup(double time)
        : Error("integration produced a non-positive stock at t = " + std::to_string(time)),
          time_(time) {}

    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class RankDeficient : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace lvcycle
