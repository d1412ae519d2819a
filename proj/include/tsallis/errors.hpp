#pragma once

#include <stdexcept>
#include <string>

namespace tsallis {

// Argument outside the mathematical domain of an operation (non-positive
// gamma argument, q outside the admissible window, p outside (0,1), ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An iterative kernel ran out of iterations before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sample whose pooled statistic T is zero; every estimator divides by a
// power of T so there is nothing sensible to return.
class DegenerateSampleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Observation below its declared location parameter.
class InconsistentLocationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Request exceeds a fixed implementation limit (e.g. 2^k subset sums).
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

// Malformed textual input (CSV bodies, comma lists).
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tsallis
