#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nbwalk {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes, so new error kinds should derive from one of the two roots.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidSize : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class RegularityError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class UnsupportedDegree : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ParseError : public InvalidArgument {
public:
    ParseError(std::size_t line, const std::string& what)
        : InvalidArgument("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A configured size/depth budget would be exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

class OracleBudgetError : public CapacityError {
public:
    using CapacityError::CapacityError;
};

}  // namespace nbwalk
