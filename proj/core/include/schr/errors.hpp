#pragma once

#include <stdexcept>
#include <string>

namespace schr {

// Caller broke an interface contract (layout mismatch, wrong array length).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Input lies outside the mathematical domain of the operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Parameters admit no strictly positive drug-addiction equilibrium.
class NoEndemicEquilibrium : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scenario file or CLI configuration is malformed or fails validation.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace schr
