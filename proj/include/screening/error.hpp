#pragma once

#include <stdexcept>
#include <string>

namespace screening {

// Input outside the mathematical domain of an operation (c <= 0, p > 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Result or intermediate not representable (population scale overflow, gamma^t overflow).
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

// A Monte Carlo plan asks for more individual draws than the configured budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario or parameter map does not match its schema.
class SchemaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// File system failure while writing outputs; the message carries the path.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace screening
