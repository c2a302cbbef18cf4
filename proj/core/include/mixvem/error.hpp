#pragma once

#include <stdexcept>
#include <string>

namespace mixvem {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration (family/domain mismatch, bad N, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Degenerate or inconsistent mesh geometry/topology.
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Factorization failure, singular systems, non-convergence, positivity violations.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace mixvem
