#pragma once

#include <stdexcept>
#include <string>

namespace horo {

// Bad input: malformed domain, overlapping balls, unknown names, parse errors.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A computation produced or received non-finite / degenerate data.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace horo
