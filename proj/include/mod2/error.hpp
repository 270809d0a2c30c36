#pragma once

#include <stdexcept>
#include <string>

namespace mod2 {

/// Raised for invalid input: malformed files, violated preconditions,
/// configurations the numerical kernels cannot resolve.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a result contradicts a parity invariant that must hold
/// for valid input. Indicates a kernel bug rather than bad input.
class ConsistencyError : public std::logic_error {
public:
    explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

} // namespace mod2
