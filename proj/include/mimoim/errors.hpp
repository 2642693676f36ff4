#pragma once

#include <stdexcept>
#include <string>

namespace mimoim {

// Wrong lengths or shapes handed to an operation.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Inconsistent system parameters (N, K, C_p, L, detector/scheme pairing).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An index combination that is not a row of the look-up table.
class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Non-finite inputs or non-positive variances.
class NumericError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Joint ML search larger than the configured hypothesis budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace mimoim
