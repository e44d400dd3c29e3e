#pragma once

#include <stdexcept>
#include <string>

namespace polyvem {

// All library errors derive from Error so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDomainError : Error {
    using Error::Error;
};
struct DegenerateElementError : Error {
    using Error::Error;
};
struct GeometricMismatchError : Error {
    using Error::Error;
};
struct InvalidMergeError : Error {
    using Error::Error;
};
struct ConditioningError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};
struct SolverError : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

}  // namespace polyvem
