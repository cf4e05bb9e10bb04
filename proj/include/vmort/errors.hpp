#ifndef VMORT_ERRORS_HPP
#define VMORT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vmort {

// Error taxonomy used across the library. Each type corresponds to a
// distinct failure mode so callers can react (and tests can assert)
// without parsing messages.

struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct GridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical blow-up; carries the grid time at which it was detected.
struct DivergenceError : std::runtime_error {
    double time;
    explicit DivergenceError(const std::string& what, double t)
        : std::runtime_error(what + " at t=" + std::to_string(t)), time(t) {}
};

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularityError : std::runtime_error {
    double time;
    explicit SingularityError(const std::string& what, double t)
        : std::runtime_error(what + " at t=" + std::to_string(t)), time(t) {}
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace vmort

#endif
