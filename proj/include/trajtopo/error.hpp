#pragma once

#include <stdexcept>
#include <string>

namespace trajtopo {

/// Error caused by bad user input (missing file, malformed row, invalid
/// parameter). The CLI maps this to exit code 1; everything else is treated
/// as an internal failure and maps to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& message) : std::runtime_error(message) {}
};

inline void internal_check(bool condition, const std::string& message) {
    if (!condition) {
        throw std::logic_error("internal invariant violated: " + message);
    }
}

}  // namespace trajtopo
