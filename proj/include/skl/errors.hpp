#pragma once
#include <stdexcept>
#include <string>

namespace skl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// reading a coefficient the series does not know
struct PrecisionError : Error {
    using Error::Error;
};

// caller broke a precondition
struct DomainError : Error {
    using Error::Error;
};

// numerical or algebraic failure inside an algorithm
struct ComputationError : Error {
    using Error::Error;
};

struct DataError : Error {
    using Error::Error;
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw DomainError(msg);
}

}  // namespace skl
