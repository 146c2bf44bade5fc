#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nnenc {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector or matrix widths that do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Class count below two, or a class index outside 1..r.
class ClassError : public Error {
public:
    using Error::Error;
};

/// Malformed input data. Carries the 1-based line number when known (0 otherwise).
class DataError : public Error {
public:
    DataError(const std::string& what, std::size_t line = 0)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Invalid configuration value (learning rate, fold count, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite error value.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t iteration)
        : Error(what), iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

}  // namespace nnenc
