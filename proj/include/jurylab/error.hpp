#pragma once

#include <stdexcept>
#include <string>

namespace jurylab {

/// Bad input: malformed spec, out-of-range parameter, rejected flag.
/// The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numeric kernel produced something it cannot stand behind (NaN, lost mass).
/// The CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

}  // namespace jurylab
