#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace sarplan {

// Base for every failure raised by the library. The CLI maps subclasses to
// exit codes and the service maps them to HTTP statuses.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside a documented validity range (projection window, DEM extent).
class RangeError : public Error {
public:
    using Error::Error;
};

// A parameter violating a type invariant. `field` names the offending key
// using the same spelling as the JSON documents.
class InvalidParameter : public Error {
public:
    InvalidParameter(std::string field, const std::string& message)
        : Error(message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Text-format failure. `line` is 1-based; 0 when no line applies.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Image cannot be projected to the ground (oblique camera).
class NotGeoreferenceable : public Error {
public:
    using Error::Error;
};

// Plan cannot be flown under the battery/distance limits.
class InfeasiblePlan : public Error {
public:
    using Error::Error;
};

// Internal consistency check failed. Never expected in correct operation.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace sarplan
