#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgcurv {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A line of edge-list input could not be accepted.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Graph construction rejected (duplicate edge, self-loop, bad weight or id).
class InvalidGraph : public Error {
public:
    using Error::Error;
};

/// An operation's mathematical hypothesis does not hold for the input,
/// e.g. epsilon at or above the consensus index.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace sgcurv
