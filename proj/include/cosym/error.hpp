#pragma once

#include <stdexcept>
#include <string>

namespace cosym {

/// Point outside the chart domain, or an argument outside the admissible range.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Rank-deficient immersion point, minimal point where |H| is needed, etc.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested operation needs a structure the input does not have
/// (isothermal coordinates, a higher jet order, a finer grid, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Unknown family, check name or malformed scenario record.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cosym
