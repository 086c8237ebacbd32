#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "qseries/errors.hpp"

namespace qseries {

/// Working scalar for every product and series.
using QComplex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Throws overflow_error unless both components are finite.
inline const QComplex& ensure_finite(const QComplex& z, const char* what)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw overflow_error(std::string(what) + ": non-finite intermediate value");
    return z;
}

/// The base q of all q-series, restricted to the open interval (0, 1).
class Base {
public:
    explicit Base(double q) : q_(q)
    {
        if (!(q > 0.0 && q < 1.0))
            throw domain_error("base q must satisfy 0 < q < 1, got " + std::to_string(q));
    }

    double value() const noexcept { return q_; }
    operator double() const noexcept { return q_; }

private:
    double q_;
};

struct infinity_t {
    explicit constexpr infinity_t() = default;
};
inline constexpr infinity_t infinity{};

/// Length of a q-shifted factorial: a nonnegative integer or infinity.
class PochhammerOrder {
public:
    PochhammerOrder(int n) : n_(n)
    {
        if (n < 0)
            throw domain_error("q-shifted factorial order must be >= 0, got " + std::to_string(n));
    }
    PochhammerOrder(infinity_t) noexcept : n_(-1) {}

    bool is_infinite() const noexcept { return n_ < 0; }
    /// Finite order; meaningless when is_infinite().
    int count() const noexcept { return n_; }

private:
    int n_;
};

/// Value of a product, series or polynomial together with an estimate of its
/// absolute error.
struct EvalResult {
    QComplex value{0.0, 0.0};
    double err_estimate = 0.0;
    int terms_used = 0;
    /// The series terminated; err_estimate then only accounts for rounding.
    bool terminated = false;
    /// err_estimate rests on the last-term magnitude rather than a certified tail bound.
    bool heuristic = false;

    double real() const noexcept { return value.real(); }
    double magnitude() const noexcept { return std::abs(value); }
};

namespace detail {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline double max_modulus(std::initializer_list<QComplex> xs)
{
    double m = 0.0;
    for (const auto& x : xs)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace detail
} // namespace qseries
