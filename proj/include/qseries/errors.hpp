#pragma once

#include <stdexcept>
#include <string>

namespace qseries {

/// Root of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside the region where the requested quantity is defined
/// (base outside (0,1), modulus hypothesis violated, denominator pole, ...).
class domain_error : public error {
public:
    using error::error;
};

/// A series or quadrature did not reach its accuracy target within its budget.
class convergence_error : public error {
public:
    using error::error;
};

/// An intermediate product or sum left the representable range.
class overflow_error : public error {
public:
    using error::error;
};

/// An internal consistency check failed (two evaluation routes disagree,
/// a value that must be real came out complex, ...).
class consistency_error : public error {
public:
    using error::error;
};

} // namespace qseries
