#ifndef FINSEC_ERRORS_HPP
#define FINSEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace finsec {

// Domain error types. Each maps to one failure mode of the numerical
// laboratory; callers are expected to catch the specific type.

struct ZeroOnCircleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotInterlacingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SpectrumMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NegativeSquareError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotSelfAdjointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotNormalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalBreakdownError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TooFewIndicesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration file problems carry the offending key.
struct ConfigError : std::runtime_error {
    ConfigError(std::string key_, const std::string& what_)
        : std::runtime_error(what_), key(std::move(key_)) {}
    std::string key;
};

} // namespace finsec

#endif
