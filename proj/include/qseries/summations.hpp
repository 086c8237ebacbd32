#pragma once

#include <cmath>
#include <complex>

#include "qseries/errors.hpp"
#include "qseries/qcore.hpp"
#include "qseries/types.hpp"

namespace qseries {

/// q-Gauss: 2phi1(a, b; c; q, c/ab) = (c/a, c/b; q)_inf / (c, c/ab; q)_inf, |c/ab| < 1.
inline EvalResult qgauss_sum(QComplex a, QComplex b, QComplex c, Base q)
{
    if (a == QComplex{0.0, 0.0} || b == QComplex{0.0, 0.0})
        throw domain_error("q-Gauss sum needs a, b != 0");
    const QComplex z = c / (a * b);
    if (!(std::abs(z) < 1.0))
        throw domain_error("q-Gauss sum needs |c/ab| < 1");
    return qpoch_multi({c / a, c / b}, q, infinity) / qpoch_multi({c, z}, q, infinity);
}

/// q-Chu-Vandermonde in the form
///   2phi1(q^{-n}, alpha q^n; q alpha z; q, q z) = (1/z; q)_n (-z)^n q^{-C(n,2)} / (q alpha z; q)_n.
inline EvalResult qchu_sum(int n, QComplex alpha, QComplex z, Base q)
{
    if (n < 0)
        throw domain_error("q-Chu-Vandermonde sum needs n >= 0");
    if (z == QComplex{0.0, 0.0})
        throw domain_error("q-Chu-Vandermonde sum in this form needs z != 0");
    const double qv = q.value();
    // (1/z; q)_n (-z)^n q^{-C(n,2)} = prod_{k<n} (1 - z q^{-k})
    QComplex num = 1.0;
    double qk = 1.0;
    for (int k = 0; k < n; ++k, qk *= qv)
        num *= (1.0 - z / qk);
    return exact(num) / qpoch(qv * alpha * z, q, n);
}

/// q-Pfaff-Saalschuetz in the form
///   3phi2(q^{-n}, alpha q^n, alpha u v / q; alpha u, alpha v; q, q)
///     = (q/u, q/v; q)_n (alpha u v / q)^n / (alpha u, alpha v; q)_n.
inline EvalResult qsaalschutz_sum(int n, QComplex alpha, QComplex u, QComplex v, Base q)
{
    if (n < 0)
        throw domain_error("q-Pfaff-Saalschuetz sum needs n >= 0");
    if (u == QComplex{0.0, 0.0} || v == QComplex{0.0, 0.0})
        throw domain_error("q-Pfaff-Saalschuetz sum in this form needs u, v != 0");
    const double qv = q.value();
    return qpoch_multi({qv / u, qv / v}, q, n) * exact(std::pow(alpha * u * v / qv, n))
           / qpoch_multi({alpha * u, alpha * v}, q, n);
}

namespace detail {

inline EvalResult verma_jain_closed(int n, QComplex alpha, Base q)
{
    if (n < 0)
        throw domain_error("Verma-Jain sum needs n >= 0");
    if (n % 2 == 1)
        return exact({0.0, 0.0});
    const int l = n / 2;
    const double qv = q.value();
    const Base q2(qv * qv);
    const double sign = l % 2 ? -1.0 : 1.0;
    return exact(sign * std::pow(qv, static_cast<double>(l) * l) * std::pow(alpha, l)) * qpoch(qv, q2, l)
           / qpoch(qv * alpha, q2, l);
}

inline EvalResult andrews_watson_closed(int n, QComplex alpha, QComplex lambda, Base q)
{
    if (n < 0)
        throw domain_error("q-Watson sum needs n >= 0");
    if (n % 2 == 1)
        return exact({0.0, 0.0});
    if (lambda == QComplex{0.0, 0.0})
        throw domain_error("q-Watson sum needs lambda != 0");
    const int l = n / 2;
    const double qv = q.value();
    const Base q2(qv * qv);
    return qpoch_multi({QComplex(qv), alpha * qv / lambda}, q2, l) * exact(std::pow(lambda, l))
           / qpoch_multi({qv * alpha, qv * lambda}, q2, l);
}

} // namespace detail

/// 3phi2(q^{-n}, alpha q^n, 0; sqrt(q alpha), -sqrt(q alpha); q, q):
/// 0 for odd n, (-1)^l q^{l^2} (q; q^2)_l alpha^l / (q alpha; q^2)_l for n = 2l.
inline QComplex verma_jain_sum(int n, QComplex alpha, Base q)
{
    return detail::verma_jain_closed(n, alpha, q).value;
}

/// 4phi3(q^{-n}, alpha q^n, sqrt(lambda), -sqrt(lambda); sqrt(q alpha), -sqrt(q alpha), lambda; q, q):
/// 0 for odd n, (q, alpha q / lambda; q^2)_{n/2} lambda^{n/2} / (q alpha, q lambda; q^2)_{n/2} for even n.
inline QComplex andrews_watson_sum(int n, QComplex alpha, QComplex lambda, Base q)
{
    return detail::andrews_watson_closed(n, alpha, lambda, q).value;
}

} // namespace qseries
