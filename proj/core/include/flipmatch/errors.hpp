#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flipmatch {

// Base of every error the library throws. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad files, non-perfect matchings,
// degenerate point sets, caller bugs such as segments sharing an endpoint.
class InvalidInput : public Error {
public:
    using Error::Error;
};

class CoordinateOverflow : public Error {
public:
    using Error::Error;
};

// A crossing pair that is not (or no longer) present in the matching.
class StaleCrossing : public Error {
public:
    using Error::Error;
};

class ReplayError : public Error {
public:
    ReplayError(std::size_t step, const std::string& what)
        : Error("replay failed at step " + std::to_string(step) + ": " + what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class GenerationFailed : public Error {
public:
    using Error::Error;
};

class InapplicableStrategy : public Error {
public:
    using Error::Error;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

// A mathematical invariant of the flip process was observed to fail.
// Never expected; indicates a bug or a counterexample worth pinning.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace flipmatch
