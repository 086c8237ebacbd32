#pragma once

// Scalar-generic kernels. Every routine here is written once over a real type
// `Real` (double or an MPFR-backed boost::multiprecision number) so that the
// ill-conditioned terminating sums can be re-run at higher precision from the
// same source.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "qseries/errors.hpp"
#include "qseries/types.hpp"

namespace qseries::detail {

template <class Real>
using cplx = std::complex<Real>;

template <class Real>
Real epsilon_of()
{
    return std::numeric_limits<Real>::epsilon();
}

template <class Real>
cplx<Real> lift(const QComplex& z)
{
    return {Real(z.real()), Real(z.imag())};
}

template <class Real>
QComplex to_qcomplex(const cplx<Real>& z)
{
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

template <class Real>
Real modulus(const cplx<Real>& z)
{
    using std::sqrt;
    return sqrt(std::norm(z));
}

template <class Real>
bool is_zero(const cplx<Real>& z)
{
    return z.real() == 0 && z.imag() == 0;
}

/// q^k for integer k >= 0 by repeated squaring.
template <class Real>
Real int_power(Real base, std::int64_t k)
{
    Real result(1);
    while (k > 0) {
        if (k & 1)
            result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

template <class Real>
cplx<Real> int_power(cplx<Real> base, std::int64_t k)
{
    cplx<Real> result(Real(1), Real(0));
    while (k > 0) {
        if (k & 1)
            result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

/// (a; q)_n for finite n.
template <class Real>
cplx<Real> qpoch_finite(const cplx<Real>& a, const Real& q, int n)
{
    cplx<Real> p(Real(1), Real(0));
    cplx<Real> aqk = a;
    for (int k = 0; k < n; ++k) {
        p *= cplx<Real>(Real(1), Real(0)) - aqk;
        aqk *= q;
    }
    return p;
}

template <class Real>
cplx<Real> qpoch_finite(std::span<const cplx<Real>> as, const Real& q, int n)
{
    cplx<Real> p(Real(1), Real(0));
    for (const auto& a : as)
        p *= qpoch_finite(a, q, n);
    return p;
}

/// Partial result of a finite sum: value, a first-order rounding bound and
/// the sum of term magnitudes (the conditioning scale).
template <class Real>
struct PartialSum {
    cplx<Real> value;
    Real err;
    Real abs_sum;
    int terms = 0;
};

/// Sum_{k=0}^{n} (q^{-n}, upper; q)_k / (q, lower; q)_k z^k, with the q^{-n}
/// factor formed from exact powers of q so that (q^{-n}; q)_{n+1} = 0 holds.
template <class Real>
PartialSum<Real> terminating_sum(int n, std::span<const cplx<Real>> upper,
                                 std::span<const cplx<Real>> lower, const Real& q,
                                 const cplx<Real>& z)
{
    const cplx<Real> one(Real(1), Real(0));
    const Real q_neg_n = Real(1) / int_power(q, n);

    cplx<Real> term = one;
    cplx<Real> sum = one;
    Real abs_sum(1);
    Real weighted(0); // sum of k |t_k|
    Real qk(1);       // q^k
    for (int k = 0; k < n; ++k) {
        cplx<Real> num = (Real(1) - q_neg_n * qk) * z;
        cplx<Real> den(Real(1) - q * qk, Real(0));
        for (const auto& u : upper)
            num *= one - u * qk;
        for (const auto& l : lower) {
            const cplx<Real> f = one - l * qk;
            if (is_zero(f))
                throw domain_error("denominator parameter equals q^-" + std::to_string(k)
                                   + " before the series terminates");
            den *= f;
        }
        term *= num / den;
        sum += term;
        const Real mag = modulus(term);
        abs_sum += mag;
        weighted += Real(k + 1) * mag;
        qk *= q;
    }
    const auto params = static_cast<int>(upper.size() + lower.size());
    const Real eps = epsilon_of<Real>();
    const Real err = eps * (Real(2 * params + 6) * weighted + Real(n + 1) * abs_sum);
    return {sum, err, abs_sum, n + 1};
}

/// q^{C(n,2)} * Sum_{k=0}^{n} (q^{-n}, upper; q)_k / (q, lower; q)_k z^k, summed
/// in the regrouped form
///   Sum_k (-1)^k q^{C(n-k,2)} [n choose k]_q (upper)_k/(lower)_k (z/q)^k
/// whose terms stay bounded where the plain terms grow like q^{-nk}.
template <class Real>
PartialSum<Real> terminating_sum_rescaled(int n, std::span<const cplx<Real>> upper,
                                          std::span<const cplx<Real>> lower, const Real& q,
                                          const cplx<Real>& z)
{
    using std::exp;
    using std::log;
    const cplx<Real> one(Real(1), Real(0));
    const cplx<Real> w = z / q;
    const Real w_mod = modulus(w);
    const cplx<Real> w_phase = w_mod > 0 ? w / w_mod : one;
    const Real log_q = log(q);
    const Real log_w = w_mod > 0 ? log(w_mod) : Real(0);

    cplx<Real> ratio_part = one; // [n k]_q (upper)_k / (lower)_k (-w_phase)^k
    cplx<Real> sum(Real(0), Real(0));
    Real abs_sum(0);
    Real weighted(0);
    Real qk(1);
    int used = 0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0 && w_mod == 0)
            break;
        const std::int64_t nk = n - k;
        const Real scale = exp(Real(nk * (nk - 1) / 2) * log_q + Real(k) * log_w);
        const cplx<Real> term = ratio_part * scale;
        sum += term;
        const Real mag = modulus(term);
        abs_sum += mag;
        weighted += Real(k + 1) * mag;
        ++used;
        if (k == n)
            break;
        // advance: [n k+1]/[n k] = (1 - q^{n-k}) / (1 - q^{k+1})
        cplx<Real> num(-(Real(1) - int_power(q, n - k)), Real(0));
        cplx<Real> den(Real(1) - q * qk, Real(0));
        for (const auto& u : upper)
            num *= one - u * qk;
        for (const auto& l : lower) {
            const cplx<Real> f = one - l * qk;
            if (is_zero(f))
                throw domain_error("denominator parameter equals q^-" + std::to_string(k)
                                   + " before the series terminates");
            den *= f;
        }
        ratio_part *= num / den * w_phase;
        qk *= q;
    }
    const auto params = static_cast<int>(upper.size() + lower.size());
    const Real eps = epsilon_of<Real>();
    const Real err = eps * (Real(2 * params + 10) * weighted + Real(n + 1) * abs_sum);
    return {sum, err, abs_sum, used};
}

} // namespace qseries::detail
