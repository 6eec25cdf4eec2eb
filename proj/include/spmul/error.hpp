#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spmul {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A packed exponent (or a sum of two) does not fit its bit field.
class OverflowError : public Error {
public:
    using Error::Error;
};

// Malformed expression text or polynomial file. `position` is a 0-based
// character offset for expressions and a 1-based line number for files.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class TransportError : public Error {
public:
    using Error::Error;
};

class ClusterError : public Error {
public:
    using Error::Error;
};

} // namespace spmul
