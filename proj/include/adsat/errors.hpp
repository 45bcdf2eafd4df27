#pragma once

#include <stdexcept>
#include <string>

namespace adsat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ensemble or algorithm parameters that cannot be satisfied.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A constructed or loaded object violates its structural invariants.
class InvalidInstance : public Error {
public:
    using Error::Error;
};

/// Malformed text input (instance, negation, DIMACS, CSV).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Rejection sampling gave up after the retry cap.
class RetryCapExceeded : public Error {
public:
    using Error::Error;
};

/// The model counter hit its node budget; no count is returned.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// The exhaustive decider refused an instance with too many free negations.
class CapExceeded : public Error {
public:
    using Error::Error;
};

} // namespace adsat
