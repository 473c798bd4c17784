#pragma once

#include <stdexcept>
#include <string>

namespace itheta {

/// Bad input or a violated precondition (wrong signature, invalid config, malformed JSON).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation that could not finish: exhausted budgets, failed audits, quadrature caps.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace itheta
