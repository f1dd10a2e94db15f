#pragma once

#include <stdexcept>
#include <string>

namespace infobounds {

// Argument outside the mathematical domain of a function (probability
// outside [0,1], mean outside the family's mean space, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Invalid experiment / bandit / query configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Requested risk level is not reachable by the bound's envelope.
class CalibrationError : public std::runtime_error {
public:
    CalibrationError(const std::string& what, double min_risk)
        : std::runtime_error(what), min_achievable_risk_(min_risk) {}

    double min_achievable_risk() const noexcept { return min_achievable_risk_; }

private:
    double min_achievable_risk_;
};

} // namespace infobounds
