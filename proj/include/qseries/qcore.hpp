#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qseries/errors.hpp"
#include "qseries/types.hpp"

namespace qseries {

/// Relative accuracy targeted by infinite products unless the caller asks for
/// something else.
inline constexpr double kProductTarget = 0.5 * detail::kEps;

// ---------------------------------------------------------------------------
// EvalResult arithmetic with first-order error propagation.

inline EvalResult operator*(const EvalResult& x, const EvalResult& y)
{
    EvalResult r;
    r.value = ensure_finite(x.value * y.value, "product");
    r.err_estimate = x.err_estimate * std::abs(y.value) + y.err_estimate * std::abs(x.value)
                     + detail::kEps * std::abs(r.value);
    r.terms_used = x.terms_used + y.terms_used;
    r.terminated = x.terminated && y.terminated;
    r.heuristic = x.heuristic || y.heuristic;
    return r;
}

inline EvalResult operator/(const EvalResult& x, const EvalResult& y)
{
    const double ym = std::abs(y.value);
    if (ym == 0.0)
        throw domain_error("division by a vanishing product");
    EvalResult r;
    r.value = ensure_finite(x.value / y.value, "quotient");
    r.err_estimate = x.err_estimate / ym + std::abs(x.value) * y.err_estimate / (ym * ym)
                     + detail::kEps * std::abs(r.value);
    r.terms_used = x.terms_used + y.terms_used;
    r.terminated = x.terminated && y.terminated;
    r.heuristic = x.heuristic || y.heuristic;
    return r;
}

inline EvalResult operator*(const EvalResult& x, const QComplex& c)
{
    EvalResult r = x;
    r.value = ensure_finite(x.value * c, "scaled value");
    r.err_estimate = x.err_estimate * std::abs(c) + detail::kEps * std::abs(r.value);
    return r;
}

inline EvalResult exact(QComplex v)
{
    EvalResult r;
    r.value = v;
    r.terminated = true;
    return r;
}

// ---------------------------------------------------------------------------

/// (a; q)_n for finite n, (a; q)_inf otherwise.
///
/// The infinite product stops at the first K with |a| q^K / (1 - q) below
/// target/10; the neglected factors then change the product by a relative
/// amount of at most exp(|a| q^K / (1 - q)) - 1, which is folded into the
/// error estimate.
inline EvalResult qpoch(QComplex a, Base q, PochhammerOrder n, double target = kProductTarget)
{
    const double qv = q.value();
    const double am = std::abs(a);
    EvalResult r;
    QComplex p{1.0, 0.0};
    QComplex aqk = a;
    double rel_round = 0.0;
    int k = 0;

    auto multiply_factor = [&] {
        const QComplex f = 1.0 - aqk;
        const double fm = std::abs(f);
        p *= f;
        if (fm > 0.0)
            rel_round += detail::kEps * (1.0 + std::abs(aqk) / fm);
        aqk *= qv;
        ++k;
    };

    if (!n.is_infinite()) {
        while (k < n.count()) {
            multiply_factor();
            if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
                throw overflow_error("q-shifted factorial overflowed at factor " + std::to_string(k));
        }
        r.terminated = true;
        r.terms_used = k;
        r.value = p;
        r.err_estimate = rel_round * std::abs(p);
        return r;
    }

    if (am == 0.0)
        return exact({1.0, 0.0});
    const double cutoff = 0.1 * target * (1.0 - qv);
    double tail = am; // |a| q^k
    while (tail >= cutoff) {
        multiply_factor();
        tail *= qv;
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
            throw overflow_error("infinite q-shifted factorial overflowed at factor " + std::to_string(k));
    }
    const double tail_bound = tail / (1.0 - qv);
    r.value = p;
    r.terms_used = k;
    r.err_estimate = (rel_round + std::expm1(tail_bound)) * std::abs(p);
    return r;
}

/// (a_1, ..., a_m; q)_n.
inline EvalResult qpoch_multi(std::span<const QComplex> as, Base q, PochhammerOrder n,
                              double target = kProductTarget)
{
    if (as.empty())
        throw domain_error("multiple q-shifted factorial needs at least one parameter");
    EvalResult r = qpoch(as.front(), q, n, target);
    for (std::size_t i = 1; i < as.size(); ++i)
        r = r * qpoch(as[i], q, n, target);
    return r;
}

inline EvalResult qpoch_multi(std::initializer_list<QComplex> as, Base q, PochhammerOrder n,
                              double target = kProductTarget)
{
    return qpoch_multi(std::span<const QComplex>(as.begin(), as.size()), q, n, target);
}

namespace detail {

/// prod_k (1 - 2 a q^k x + a^2 q^{2k}) with x supplied through 1 - x and 1 + x.
/// Each factor is written as (1 - b)^2 + 2b(1 - x) (or the mirrored form for
/// x < 0), which keeps full relative accuracy where the factor is small.
inline EvalResult h_quadratic(double one_minus_x, double one_plus_x, QComplex a, double q,
                              double target = kProductTarget)
{
    const double am = std::abs(a);
    if (am == 0.0)
        return exact({1.0, 0.0});
    const bool upper = one_minus_x <= one_plus_x;
    QComplex p{1.0, 0.0};
    QComplex b = a;
    double tail = am;
    double rel_round = 0.0;
    double majorant = 1.0;
    int k = 0;
    const double cutoff = 0.1 * target * (1.0 - q) / 3.0;
    while (tail >= cutoff) {
        const QComplex f = upper ? (1.0 - b) * (1.0 - b) + 2.0 * b * one_minus_x
                                 : (1.0 + b) * (1.0 + b) - 2.0 * b * one_plus_x;
        const double fm = std::abs(f);
        p *= f;
        const double bm = std::abs(b);
        majorant *= (1.0 + bm) * (1.0 + bm);
        if (fm > 0.0)
            rel_round += 4.0 * kEps * (1.0 + bm) * (1.0 + bm) / fm;
        b *= q;
        tail *= q;
        ++k;
    }
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
        throw overflow_error("h product overflowed");
    EvalResult r;
    r.value = p;
    r.terms_used = k;
    r.err_estimate = (rel_round + std::expm1(3.0 * tail / (1.0 - q))) * std::abs(p)
                     + 4.0 * kEps * majorant * (p == QComplex{0.0, 0.0} ? 1.0 : 0.0);
    return r;
}

/// h(cos theta; a | q) from theta directly, with 1 -/+ cos theta formed
/// from half-angle sines so that factors vanishing at theta = 0 or pi keep
/// their relative accuracy.
inline EvalResult h_theta(double theta, QComplex a, double q)
{
    const double s = std::sin(0.5 * theta);
    const double c = std::cos(0.5 * theta);
    return h_quadratic(2.0 * s * s, 2.0 * c * c, a, q);
}

inline EvalResult h_theta_multi(double theta, std::span<const QComplex> as, double q)
{
    EvalResult r = exact({1.0, 0.0});
    for (const auto& a : as)
        r = r * h_theta(theta, a, q);
    return r;
}

} // namespace detail

/// h(x; a | q) = (a e^{i theta}, a e^{-i theta}; q)_inf with x = cos theta,
/// evaluated as the product of quadratic factors and cross-checked against
/// the two-factor form. Real parameters give a real result.
inline EvalResult h_product(double x, QComplex a, Base q)
{
    if (!(std::abs(x) <= 1.0))
        throw domain_error("h product needs |x| <= 1, got x = " + std::to_string(x));
    const EvalResult quad = detail::h_quadratic(1.0 - x, 1.0 + x, a, q.value());

    const QComplex e_it{x, std::sqrt(std::max(0.0, 1.0 - x * x))};
    const EvalResult pair = qpoch(a * e_it, q, infinity) * qpoch(a * std::conj(e_it), q, infinity);

    double majorant = 1.0;
    for (double b = std::abs(a); b > 1e-18; b *= q.value())
        majorant *= (1.0 + b) * (1.0 + b);
    const double diff = std::abs(quad.value - pair.value);
    const double allowed = 1e-12 * majorant + 16.0 * (quad.err_estimate + pair.err_estimate);
    if (diff > allowed)
        throw consistency_error("h product: quadratic-factor and two-factor forms disagree by "
                                + std::to_string(diff));

    EvalResult r = quad;
    if (a.imag() == 0.0) {
        if (std::abs(pair.value.imag()) > 1e-10 * std::abs(pair.value) + 1e-300)
            throw consistency_error("h product with real parameter has a complex value");
        r.value = {quad.value.real(), 0.0};
    }
    return r;
}

/// h(x; a_1, ..., a_m | q); the empty list gives 1.
inline EvalResult h_product_multi(double x, std::span<const QComplex> as, Base q)
{
    EvalResult r = exact({1.0, 0.0});
    for (const auto& a : as)
        r = r * h_product(x, a, q);
    return r;
}

inline EvalResult h_product_multi(double x, std::initializer_list<QComplex> as, Base q)
{
    return h_product_multi(x, std::span<const QComplex>(as.begin(), as.size()), q);
}

/// K(a, b, c, d | q) = 2 pi (abcd; q)_inf / (q, ab, ac, ad, bc, bd, cd; q)_inf.
inline EvalResult aw_constant(QComplex a, QComplex b, QComplex c, QComplex d, Base q)
{
    if (detail::max_modulus({a, b, c, d}) >= 1.0)
        throw domain_error("Askey-Wilson integral requires max(|a|,|b|,|c|,|d|) < 1");
    const EvalResult num = qpoch(a * b * c * d, q, infinity);
    const EvalResult den = qpoch_multi({QComplex(q.value()), a * b, a * c, a * d, b * c, b * d, c * d},
                                       q, infinity);
    return (num / den) * QComplex(2.0 * pi);
}

} // namespace qseries
