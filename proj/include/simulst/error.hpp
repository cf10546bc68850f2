#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simulst {

// Base of every error the toolkit throws. Callers that only care about
// "something in the input was wrong" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text at a known input line (1-based; 0 when unknown).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Well-formed text describing an impossible structure (bad tree, bad head).
class StructureError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

class DuplicateError : public Error {
public:
    using Error::Error;
};

// Records from different files that should match by id or surface do not.
class JoinError : public Error {
public:
    using Error::Error;
};

// A derived object violates an invariant it must carry (partition, bijection).
class IntegrityError : public Error {
public:
    using Error::Error;
};

class ProtocolError : public Error {
public:
    using Error::Error;
};

class CausalityError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

class AssignmentError : public Error {
public:
    using Error::Error;
};

}  // namespace simulst
