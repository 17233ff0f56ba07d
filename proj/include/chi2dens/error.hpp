#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chi2dens {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point fell outside the unit domain [0,1]^dim.
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::size_t coordinate)
        : Error(what), coordinate_(coordinate) {}
    [[nodiscard]] std::size_t coordinate() const noexcept { return coordinate_; }

private:
    std::size_t coordinate_;
};

/// Non-finite inputs or outputs in a numerical routine.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration or parameter values.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File-system or parse failures.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace chi2dens
