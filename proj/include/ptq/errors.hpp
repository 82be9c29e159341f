#pragma once

#include <stdexcept>
#include <string>

namespace ptq {

/// Input outside the mathematical domain of an operation (zero base with a
/// negative exponent, p = 0 in alpha_beta, beta >= 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid argument value such as a negative perturbative order.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A perturbative order was required but is not present in the series.
class DependencyError : public std::runtime_error {
public:
    DependencyError(int missing_order, const std::string& context)
        : std::runtime_error("missing Q_" + std::to_string(missing_order) + " required by " + context),
          missing_order_(missing_order) {}

    int missing_order() const noexcept { return missing_order_; }

private:
    int missing_order_;
};

/// Evaluation point lies outside the region where the summed series converges.
class OutsideRegionError : public DomainError {
public:
    OutsideRegionError(const std::string& what, double margin) : DomainError(what), margin_(margin) {}

    double margin() const noexcept { return margin_; }

private:
    double margin_;
};

} // namespace ptq
