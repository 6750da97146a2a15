#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bdi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class DuplicateEdgeError : public Error {
public:
    using Error::Error;
};

class MissingEdgeError : public Error {
public:
    using Error::Error;
};

class InvalidNodeError : public Error {
public:
    using Error::Error;
};

// Binary index file is unreadable; carries the byte offset of the problem.
class FormatError : public Error {
public:
    FormatError(std::size_t offset, const std::string& what)
        : Error("offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class InvalidOrientationError : public Error {
public:
    using Error::Error;
};

class InvalidPathError : public Error {
public:
    using Error::Error;
};

class IntegrityError : public Error {
public:
    using Error::Error;
};

class OracleLimitError : public Error {
public:
    using Error::Error;
};

// A check that would falsify the dense-subgraph model itself tripped.
class ModelViolationError : public Error {
public:
    using Error::Error;
};

class GenError : public Error {
public:
    using Error::Error;
};

} // namespace bdi
