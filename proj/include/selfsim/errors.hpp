#ifndef SELFSIM_ERRORS_HPP
#define SELFSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace selfsim {

// Base class for all selfsim errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input file or axiom violation. CLI exit code 1.
class SpecError : public Error {
public:
    explicit SpecError(const std::string& msg) : Error(msg) {}
};

// Both numerator and denominator vanished at the evaluation point;
// the caller should raise the working precision.
class EvalIndeterminate : public Error {
public:
    explicit EvalIndeterminate(const std::string& msg) : Error(msg) {}
};

// A factor of the Green-function decomposition evaluated to infinity.
// The query point is a candidate member of the discrete exceptional set.
class PoleHit : public Error {
public:
    explicit PoleHit(const std::string& msg) : Error(msg) {}
};

// Forward orbit did not enter the base disc within the iteration cap.
class NotInBasin : public Error {
public:
    explicit NotInBasin(const std::string& msg) : Error(msg) {}
};

// Root finder or series evaluation failed to reach the requested accuracy.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error(msg) {}
};

// A configured size/point/growth cap was exceeded. CLI exit code 3.
class ResourceCap : public Error {
public:
    explicit ResourceCap(const std::string& msg) : Error(msg) {}
};

} // namespace selfsim

#endif
