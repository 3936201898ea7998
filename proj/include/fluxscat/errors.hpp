#pragma once

#include <stdexcept>
#include <string>

namespace fluxscat {

// Argument outside an operation's stated domain.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

// Quantity evaluated where it diverges (e.g. the Aharonov-Bohm cross
// section in the forward direction chi = +-pi).
class divergence_error : public std::runtime_error {
public:
    explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical scheme could not reach the requested accuracy. Carries the
// best value obtained and its absolute error estimate.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double best_value, double abs_error_estimate)
        : std::runtime_error(what),
          best_value_(best_value),
          abs_error_estimate_(abs_error_estimate) {}

    double best_value() const noexcept { return best_value_; }
    double abs_error_estimate() const noexcept { return abs_error_estimate_; }

private:
    double best_value_;
    double abs_error_estimate_;
};

}  // namespace fluxscat
