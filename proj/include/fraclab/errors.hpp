#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Integrability hypotheses of a result fail (for example 1/p >= alpha).
class RegimeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file or document.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation produced a non-finite value or a singular system.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fraclab
