#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qseries/detail/generic.hpp"
#include "qseries/errors.hpp"
#include "qseries/hyperseries.hpp"
#include "qseries/precision.hpp"
#include "qseries/qcore.hpp"
#include "qseries/types.hpp"

namespace qseries {

/// Relative accuracy aimed for by the outer sums below.
inline constexpr double kOuterTarget = 1e-14;
inline constexpr int kOuterMaxTerms = 5000;

namespace detail {

/// prod (1 + |u| qk) / prod (1 - |l| qk): a bound on the Pochhammer part of a
/// term ratio that holds from index k onwards (it decreases with qk). +inf when
/// some |l| qk >= 1.
inline double ratio_majorant(std::span<const QComplex> upper, std::span<const QComplex> lower, double qk)
{
    double num = 1.0, den = 1.0;
    for (const auto& u : upper)
        num *= 1.0 + std::abs(u) * qk;
    for (const auto& l : lower) {
        const double lm = std::abs(l) * qk;
        if (lm >= 1.0)
            return std::numeric_limits<double>::infinity();
        den *= 1.0 - lm;
    }
    return num / den;
}

/// prod (1 - u qk) / prod (1 - l qk).
inline QComplex poch_step(std::span<const QComplex> upper, std::span<const QComplex> lower, double qk)
{
    QComplex num = 1.0, den = 1.0;
    for (const auto& u : upper)
        num *= 1.0 - u * qk;
    for (const auto& l : lower)
        den *= 1.0 - l * qk;
    if (den == QComplex{0.0, 0.0})
        throw domain_error("denominator factor vanishes in an outer sum");
    return num / den;
}

/// Adds t_0 + t_1 + ... for an outer series.
///
/// `term(n, scale)` returns t_n, accurate to target * max(|t_n|, scale).
/// `tail(n)` bounds sum_{m > n} |t_m| or returns +inf when it cannot. The sum
/// stops after three consecutive n whose tail bound is below target * |sum|;
/// where no bound is available it falls back to three consecutive terms below
/// that threshold and flags the result heuristic.
template <class Term, class Tail>
EvalResult outer_sum(Term&& term, Tail&& tail, double target, int max_terms = kOuterMaxTerms)
{
    QComplex sum{0.0, 0.0};
    double err = 0.0;
    bool heuristic = false;
    int run = 0;
    for (int n = 0; n < max_terms; ++n) {
        const double scale = std::max(std::abs(sum), 1e-300);
        const EvalResult t = term(n, scale);
        sum += t.value;
        err += t.err_estimate;
        heuristic = heuristic || t.heuristic;
        ensure_finite(sum, "outer sum");
        const double threshold = target * std::abs(sum);
        const double bound = tail(n);
        if (std::isfinite(bound)) {
            run = bound <= threshold ? run + 1 : 0;
            if (run >= 3)
                return {sum, err + bound + kEps * std::abs(sum), n + 1, false, heuristic};
        } else {
            run = t.magnitude() <= threshold ? run + 1 : 0;
            if (run >= 3)
                return {sum, err + 10.0 * t.magnitude() + kEps * std::abs(sum), n + 1, false, true};
        }
    }
    throw convergence_error("outer sum did not settle within " + std::to_string(max_terms) + " terms");
}

/// Rounding bound for a term built from `factors` floating multiplications.
inline double product_rounding(const QComplex& v, int factors)
{
    return 2.0 * factors * kEps * std::abs(v);
}

/// The q^{C(n,2)}-rescaled terminating sum
///   q^{C(n,2)} 4phi3(q^{-n}, alpha q^n, beta, delta; s, t, h; q, q z)
/// at the precision the caller's absolute floor calls for.
inline EvalResult rescaled_4phi3(int n, QComplex alpha, QComplex beta, QComplex delta,
                                 std::array<QComplex, 3> sth, QComplex z, double q, double target,
                                 double abs_floor)
{
    auto fn = [&]<class Real>() {
        using C = detail::cplx<Real>;
        const Real qr(q);
        const std::array<C, 3> up{detail::lift<Real>(alpha) * detail::int_power(qr, n), detail::lift<Real>(beta), detail::lift<Real>(delta)};
        const std::array<C, 3> lo{detail::lift<Real>(sth[0]), detail::lift<Real>(sth[1]), detail::lift<Real>(sth[2])};
        return terminating_sum_rescaled<Real>(n, std::span<const C>(up), std::span<const C>(lo), qr,
                                              C(qr, Real(0)) * detail::lift<Real>(z));
    };
    return with_adaptive_precision(fn, target, abs_floor);
}

/// sum_n (1 - alpha q^{2n})/(1 - alpha) (upper; q)_n / (q, lower; q)_n zc^n
///       * q^{C(n,2)} 4phi3(q^{-n}, alpha q^n, beta, delta; s, t, h; q, q z),
/// where upper[0] is alpha. The inner factor is bounded uniformly in n by
/// prop32_bound, which with the monotone ratio majorant gives the tail bound.
inline EvalResult rescaled_outer_sum(const std::vector<QComplex>& upper, const std::vector<QComplex>& lower,
                                     QComplex zc, QComplex beta, QComplex delta, std::array<QComplex, 3> sth,
                                     QComplex z, Base q, double target)
{
    const double qv = q.value();
    const QComplex alpha = upper.front();
    if (std::abs(1.0 - alpha) < 1e-14)
        throw domain_error("outer sum needs alpha != 1");
    double inner_bound = std::numeric_limits<double>::infinity();
    if (std::max({std::abs(sth[0]), std::abs(sth[1]), std::abs(sth[2])}) < 1.0 && std::abs(z) < 1.0)
        inner_bound = prop32_bound(alpha, std::array<QComplex, 2>{beta, delta}, sth, q, std::max(std::abs(z), 1e-12));
    std::vector<QComplex> lower_q{QComplex(qv)};
    lower_q.insert(lower_q.end(), lower.begin(), lower.end());

    QComplex base{1.0, 0.0};
    double qn = 1.0;
    auto term = [&](int n, double scale) {
        const QComplex coef = base * (1.0 - alpha * qn * qn) / (1.0 - alpha);
        base *= zc * poch_step(upper, lower_q, qn);
        qn *= qv;
        if (coef == QComplex{0.0, 0.0})
            return exact({0.0, 0.0});
        const double cm = std::abs(coef);
        const EvalResult inner = rescaled_4phi3(n, alpha, beta, delta, sth, z, qv, target, scale / cm);
        EvalResult r;
        r.value = coef * inner.value;
        r.err_estimate = cm * inner.err_estimate + product_rounding(r.value, 4 * n + 8);
        r.terms_used = inner.terms_used;
        return r;
    };
    auto tail = [&](int) {
        // base now holds the (n+1)-th coefficient without its weight
        const double rho = std::abs(zc) * ratio_majorant(upper, lower_q, qn);
        if (!(rho < 1.0) || !std::isfinite(inner_bound))
            return std::numeric_limits<double>::infinity();
        const double weight = (1.0 + std::abs(alpha) * qn * qn) / std::abs(1.0 - alpha);
        return std::abs(base) * weight * inner_bound / (1.0 - rho);
    };
    return outer_sum(term, tail, target);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Twelve-parameter integral and its double-series form

/// Parameters shared by the twelve-parameter integral and the double series.
struct TwelveParams {
    QComplex a, b, c, d, r, s, t, h, z, beta, delta;
    Base q;

    /// alpha = a^2 bcdr / q.
    QComplex alpha() const { return a * a * b * c * d * r / q.value(); }
};

/// sum_n (1 - alpha q^{2n})(alpha, ab, ac, ad, ar; q)_n / ((1 - alpha)(q, abcd, abcr, abdr, acdr; q)_n)
///       (-bcdr)^n q^{n(n-1)/2} 4phi3(q^{-n}, alpha q^n, beta, delta; s, t, h; q, qz),
/// the outer sum shared by both right-hand sides.
inline EvalResult twelve_param_sum(const TwelveParams& p, double target = kOuterTarget)
{
    const auto& [a, b, c, d, r, s, t, h, z, beta, delta, q] = p;
    return detail::rescaled_outer_sum({p.alpha(), a * b, a * c, a * d, a * r},
                                      {a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r}, -b * c * d * r,
                                      beta, delta, {s, t, h}, z, q, target);
}

/// 2pi (abcd, abcr, abdr, acdr; q)_inf / (q, ab, ac, ad, ar, bc, bd, br, cd, cr, dr, q alpha; q)_inf.
inline EvalResult twelve_integral_prefactor(const TwelveParams& p)
{
    const auto& [a, b, c, d, r, s, t, h, z, beta, delta, q] = p;
    const double qv = q.value();
    return exact(2.0 * pi) * qpoch_multi({a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r}, q, infinity)
           / qpoch_multi({QComplex(qv), a * b, a * c, a * d, a * r, b * c, b * d, b * r, c * d, c * r, d * r,
                          qv * p.alpha()},
                         q, infinity);
}

/// (abdr, acdr; q)_inf / (dr, q alpha; q)_inf.
inline EvalResult double_series_prefactor(const TwelveParams& p)
{
    const auto& [a, b, c, d, r, s, t, h, z, beta, delta, q] = p;
    return qpoch_multi({a * b * d * r, a * c * d * r}, q, infinity)
           / qpoch_multi({d * r, q.value() * p.alpha()}, q, infinity);
}

/// Integral side over double-series side: 2pi (abcd, abcr; q)_inf / (q, ab, ac, ad, ar, bc, bd, br, cd, cr; q)_inf.
inline EvalResult twelve_to_double_ratio(const TwelveParams& p)
{
    return twelve_integral_prefactor(p) / double_series_prefactor(p);
}

namespace detail {

/// 3phi2(ab q^n, ac q^n, bc; abcd q^n, abcr q^n; q, dr).
inline EvalResult inner_3phi2(int n, QComplex a, QComplex b, QComplex c, QComplex d, QComplex r, Base q,
                              double target)
{
    const double qn = std::pow(q.value(), n);
    return phi_eval(SeriesSpec({a * b * qn, a * c * qn, b * c}, {a * b * c * d * qn, a * b * c * r * qn}, q, d * r),
                    target);
}

/// sum_n (upper; q)_n / (q, lower; q)_n zarg^n 3phi2(ab q^n, ac q^n, bc; abcd q^n, abcr q^n; q, dr).
/// Every inner 3phi2 is dominated by the one with absolute-valued parameters at n = 0.
inline EvalResult g3_outer_sum(const std::vector<QComplex>& upper, const std::vector<QComplex>& lower,
                               QComplex zarg, QComplex a, QComplex b, QComplex c, QComplex d, QComplex r, Base q,
                               double target)
{
    const double qv = q.value();
    if (!(std::abs(d * r) < 1.0))
        throw domain_error("inner 3phi2 needs |dr| < 1");
    double inner_bound = std::numeric_limits<double>::infinity();
    if (std::abs(a * b * c * d) < 1.0 && std::abs(a * b * c * r) < 1.0) {
        const EvalResult m = phi_eval(SeriesSpec({-std::abs(a * b), -std::abs(a * c), -std::abs(b * c)},
                                                 {std::abs(a * b * c * d), std::abs(a * b * c * r)}, q,
                                                 std::abs(d * r)),
                                      1e-12);
        inner_bound = m.value.real() + m.err_estimate;
    }
    std::vector<QComplex> lower_q{QComplex(qv)};
    lower_q.insert(lower_q.end(), lower.begin(), lower.end());

    QComplex coef{1.0, 0.0};
    double qn = 1.0;
    auto term = [&](int n, double) {
        const QComplex cf = coef;
        coef *= zarg * poch_step(upper, lower_q, qn);
        qn *= qv;
        if (cf == QComplex{0.0, 0.0})
            return exact({0.0, 0.0});
        const EvalResult g = inner_3phi2(n, a, b, c, d, r, q, target);
        EvalResult out;
        out.value = cf * g.value;
        out.err_estimate = std::abs(cf) * g.err_estimate + product_rounding(out.value, 2 * n + 4);
        out.heuristic = g.heuristic;
        return out;
    };
    auto tail = [&](int) {
        const double rho = std::abs(zarg) * ratio_majorant(upper, lower_q, qn);
        if (!(rho < 1.0) || !std::isfinite(inner_bound))
            return std::numeric_limits<double>::infinity();
        return std::abs(coef) * inner_bound / (1.0 - rho);
    };
    return outer_sum(term, tail, target);
}

} // namespace detail

/// sum_n (beta, delta, ab, ac, ad, ar; q)_n (bcdrz)^n / (q, s, t, h, abcd, abcr; q)_n
///       3phi2(ab q^n, ac q^n, bc; abcd q^n, abcr q^n; q, dr).
inline EvalResult double_series_lhs(const TwelveParams& p, double target = kOuterTarget)
{
    const auto& [a, b, c, d, r, s, t, h, z, beta, delta, q] = p;
    return detail::g3_outer_sum({beta, delta, a * b, a * c, a * d, a * r}, {s, t, h, a * b * c * d, a * b * c * r},
                                b * c * d * r * z, a, b, c, d, r, q, target);
}

// ---------------------------------------------------------------------------
// Special cases of the twelve-parameter integral

/// Parameters a, b, c, d, r and q of the special cases.
struct FiveParams {
    QComplex a, b, c, d, r;
    Base q;

    QComplex alpha() const { return a * a * b * c * d * r / q.value(); }

    TwelveParams twelve() const { return {a, b, c, d, r, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, q}; }
};

/// 8W7(a^2bcdr/q; ab, ac, ad, ar, 1/z; q, bcdrz) in term form with partners
/// acdr, abdr, abcr, abcd, a^2bcdrz.
inline EvalResult thm61_vwp(const FiveParams& p, QComplex z, double target = 1e-15)
{
    const auto& [a, b, c, d, r, q] = p;
    if (z == QComplex{0.0, 0.0})
        throw domain_error("the very-well-poised side needs z != 0");
    const QComplex A = a * a * b * c * d * r;
    return vwp_terms(A / q.value(), {a * b, a * c, a * d, a * r, 1.0 / z},
                     {a * c * d * r, a * b * d * r, a * b * c * r, a * b * c * d, A * z}, q, b * c * d * r * z,
                     target);
}

/// sum_n (1 - alpha q^{2n})(alpha, ab, ac, ad, ar, q/u, q/v; q)_n
///       / ((1 - alpha)(q, abcd, abcr, abdr, acdr, alpha u, alpha v; q)_n) (-alpha bcdr uv/q)^n q^{C(n,2)}.
inline EvalResult saalschutz_outer_sum(const FiveParams& p, QComplex u, QComplex v, double target = kOuterTarget)
{
    const auto& [a, b, c, d, r, q] = p;
    const double qv = q.value();
    const QComplex al = p.alpha();
    if (std::abs(1.0 - al) < 1e-14)
        throw domain_error("outer sum needs alpha != 1");
    const std::vector<QComplex> upper{al, a * b, a * c, a * d, a * r, qv / u, qv / v};
    const std::vector<QComplex> lower{qv, a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r, al * u, al * v};
    const QComplex zc = -al * b * c * d * r * u * v / qv;
    QComplex base{1.0, 0.0};
    double qn = 1.0;
    auto term = [&](int n, double) {
        const QComplex t = base * (1.0 - al * qn * qn) / (1.0 - al);
        base *= zc * qn * detail::poch_step(upper, lower, qn);
        qn *= qv;
        return EvalResult{t, detail::product_rounding(t, 16 * n + 4), 1, false, false};
    };
    auto tail = [&](int) {
        const double rho = std::abs(zc) * qn * detail::ratio_majorant(upper, lower, qn);
        if (!(rho < 1.0))
            return std::numeric_limits<double>::infinity();
        return std::abs(base) * (1.0 + std::abs(al) * qn * qn) / std::abs(1.0 - al) / (1.0 - rho);
    };
    return detail::outer_sum(term, tail, target);
}

namespace detail {

/// sum_n (1 - alpha q^{4n})(alpha, ab, ac, ad, ar; q)_{2n} (up2; q^2)_n
///       / ((1 - alpha)(q, abcd, abcr, abdr, acdr; q)_{2n} (lo2; q^2)_n) z2^n q^{e(n)},
/// with e(n+1) - e(n) = ka n + kb.
inline EvalResult even_outer_sum(const FiveParams& p, const std::vector<QComplex>& up2,
                                 const std::vector<QComplex>& lo2, QComplex z2, int ka, int kb, double target)
{
    const auto& [a, b, c, d, r, q] = p;
    const double qv = q.value();
    const QComplex al = p.alpha();
    if (std::abs(1.0 - al) < 1e-14)
        throw domain_error("outer sum needs alpha != 1");
    const std::vector<QComplex> upper{al, a * b, a * c, a * d, a * r};
    const std::vector<QComplex> lower{qv, a * b * c * d, a * b * c * r, a * b * d * r, a * c * d * r};
    QComplex base{1.0, 0.0};
    int n_next = 0;
    auto step_bound = [&](int m) {
        const double q2m = std::pow(qv, 2 * m);
        return std::abs(z2) * std::pow(qv, ka * m + kb) * ratio_majorant(upper, lower, q2m)
               * ratio_majorant(upper, lower, q2m * qv) * ratio_majorant(up2, lo2, q2m);
    };
    auto term = [&](int n, double) {
        const double q2n = std::pow(qv, 2 * n);
        const QComplex t = base * (1.0 - al * q2n * q2n) / (1.0 - al);
        base *= z2 * std::pow(qv, ka * n + kb) * poch_step(upper, lower, q2n) * poch_step(upper, lower, q2n * qv)
                * poch_step(up2, lo2, q2n);
        n_next = n + 1;
        return EvalResult{t, product_rounding(t, 24 * n + 4), 1, false, false};
    };
    auto tail = [&](int) {
        const double rho = step_bound(n_next);
        if (!(rho < 1.0))
            return std::numeric_limits<double>::infinity();
        const double q4 = std::pow(qv, 4 * n_next);
        return std::abs(base) * (1.0 + std::abs(al) * q4) / std::abs(1.0 - al) / (1.0 - rho);
    };
    return outer_sum(term, tail, target);
}

} // namespace detail

/// Outer sum with (q; q^2)_n / (q alpha; q^2)_n, (-alpha)^n (bcdr)^{2n} q^{3n^2 - n}.
inline EvalResult verma_jain_outer_sum(const FiveParams& p, double target = kOuterTarget)
{
    const double qv = p.q.value();
    const QComplex al = p.alpha();
    const QComplex bcdr = p.b * p.c * p.d * p.r;
    return detail::even_outer_sum(p, {QComplex(qv)}, {qv * al}, -al * bcdr * bcdr, 6, 2, target);
}

/// Outer sum with (q, q alpha/lambda; q^2)_n / (q alpha, q lambda; q^2)_n, (bcdr)^{2n} lambda^n q^{2n^2 - n}.
inline EvalResult watson_outer_sum(const FiveParams& p, QComplex lambda, double target = kOuterTarget)
{
    const double qv = p.q.value();
    const QComplex al = p.alpha();
    if (lambda == QComplex{0.0, 0.0})
        throw domain_error("the q-Watson outer sum needs lambda != 0");
    const QComplex bcdr = p.b * p.c * p.d * p.r;
    return detail::even_outer_sum(p, {QComplex(qv), qv * al / lambda}, {qv * al, qv * lambda},
                                  lambda * bcdr * bcdr, 4, 1, target);
}

// ---------------------------------------------------------------------------
// Extended Rogers summation

namespace detail {

/// Terminating r+1 phi r(q^{-n}, upper; lower; q, q) at adaptive precision with
/// the parameters rebuilt in Real by `make`.
template <class Make>
EvalResult terminating_at_q(int n, double q, const Make& make, double target, double abs_floor)
{
    auto fn = [&]<class Real>() {
        using C = detail::cplx<Real>;
        const Real qr(q);
        std::vector<C> up, lo;
        make.template operator()<Real>(qr, up, lo);
        return terminating_sum<Real>(n, std::span<const C>(up), std::span<const C>(lo), qr, C(qr, Real(0)));
    };
    return with_adaptive_precision(fn, target, abs_floor);
}

/// Outer sums whose terms are weight_n * base_n * inner(n), without a
/// certified tail: the tail test falls back to three negligible terms.
template <class Inner>
EvalResult heuristic_outer_sum(const std::vector<QComplex>& upper, const std::vector<QComplex>& lower_with_q,
                               QComplex zc, QComplex alpha, bool divide_weight, double q, const Inner& inner,
                               double target)
{
    QComplex base{1.0, 0.0};
    double qn = 1.0;
    const QComplex norm = divide_weight ? 1.0 - alpha : QComplex(1.0);
    if (std::abs(norm) < 1e-14)
        throw domain_error("outer sum needs alpha != 1");
    auto term = [&](int n, double scale) {
        const QComplex coef = base * (1.0 - alpha * qn * qn) / norm;
        base *= zc * poch_step(upper, lower_with_q, qn);
        qn *= q;
        if (coef == QComplex{0.0, 0.0})
            return exact({0.0, 0.0});
        const double cm = std::abs(coef);
        const EvalResult in = inner(n, target, scale / cm);
        EvalResult r;
        r.value = coef * in.value;
        r.err_estimate = cm * in.err_estimate + product_rounding(r.value, 4 * n + 8);
        return r;
    };
    auto tail = [](int) { return std::numeric_limits<double>::infinity(); };
    return outer_sum(term, tail, target);
}

} // namespace detail

/// Parameters alpha, a, b, c, beta, gamma of the extended Rogers summation.
struct ExtRogersParams {
    QComplex alpha, a, b, c, beta, gamma;
    Base q;
};

/// sum_n (1 - alpha q^{2n})(alpha, q/a, q/b, q/c; q)_n / (q, alpha a, alpha b, alpha c; q)_n (alpha abc/q^2)^n
///       4phi3(q^{-n}, alpha q^n, beta, gamma; q/a, q/b, alpha beta gamma ab/q; q, q).
/// With gamma_free = false the inner series is the 3phi2 obtained at gamma = 0.
inline EvalResult ext_rogers_lhs(const ExtRogersParams& p, bool gamma_free = true, double target = kOuterTarget)
{
    const auto& [al, a, b, c, beta, gamma, q] = p;
    const double qv = q.value();
    if (a == QComplex{0.0, 0.0} || b == QComplex{0.0, 0.0} || c == QComplex{0.0, 0.0})
        throw domain_error("extended Rogers sum needs a, b, c != 0");
    const std::vector<QComplex> upper{al, qv / a, qv / b, qv / c};
    const std::vector<QComplex> lower{qv, al * a, al * b, al * c};
    auto inner = [&](int n, double tgt, double floor) {
        if (n == 0)
            return exact({1.0, 0.0});
        auto make = [&]<class Real>(const Real& qr, std::vector<detail::cplx<Real>>& up, std::vector<detail::cplx<Real>>& lo) {
            const auto A = detail::lift<Real>(al), a_ = detail::lift<Real>(a), b_ = detail::lift<Real>(b);
            const detail::cplx<Real> qc(qr, Real(0));
            up = {A * detail::int_power(qr, n), detail::lift<Real>(beta)};
            lo = {qc / a_, qc / b_};
            if (gamma_free) {
                up.push_back(detail::lift<Real>(gamma));
                lo.push_back(A * detail::lift<Real>(beta) * detail::lift<Real>(gamma) * a_ * b_ / qc);
            }
        };
        return detail::terminating_at_q(n, qv, make, tgt, floor);
    };
    return detail::heuristic_outer_sum(upper, lower, al * a * b * c / (qv * qv), al, false, qv, inner, target);
}

/// (alpha, alpha ac/q, alpha bc/q, alpha beta ab/q, alpha gamma ab/q, alpha beta gamma abc/q^2; q)_inf
/// / (alpha a, alpha b, alpha c, alpha beta abc/q^2, alpha gamma abc/q^2, alpha beta gamma ab/q; q)_inf.
/// With gamma_free = false: (alpha, alpha ac/q, alpha bc/q, alpha beta ab/q; q)_inf
/// / (alpha a, alpha b, alpha c, alpha beta abc/q^2; q)_inf.
inline EvalResult ext_rogers_rhs(const ExtRogersParams& p, bool gamma_free = true)
{
    const auto& [al, a, b, c, beta, gamma, q] = p;
    const double qv = q.value();
    const double q2 = qv * qv;
    if (!gamma_free)
        return qpoch_multi({al, al * a * c / qv, al * b * c / qv, al * beta * a * b / qv}, q, infinity)
               / qpoch_multi({al * a, al * b, al * c, al * beta * a * b * c / q2}, q, infinity);
    return qpoch_multi({al, al * a * c / qv, al * b * c / qv, al * beta * a * b / qv, al * gamma * a * b / qv,
                        al * beta * gamma * a * b * c / q2},
                       q, infinity)
           / qpoch_multi({al * a, al * b, al * c, al * beta * a * b * c / q2, al * gamma * a * b * c / q2,
                          al * beta * gamma * a * b / qv},
                         q, infinity);
}

/// Parameters of the substituted form (c -> qt, then (a, b) -> (q/ab, q/ac)).
struct ExtRogersSubParams {
    QComplex alpha, a, b, c, t, beta, gamma;
    Base q;
};

/// sum_n (1 - alpha q^{2n})(alpha, ab, ac, 1/t; q)_n / ((1 - alpha)(q, q alpha/ab, q alpha/ac, alpha t q; q)_n)
///       (alpha t q / a^2 bc)^n 4phi3(q^{-n}, alpha q^n, beta, gamma; ab, ac, q alpha beta gamma / a^2 bc; q, q).
inline EvalResult ext_rogers_sub_lhs(const ExtRogersSubParams& p, double target = kOuterTarget)
{
    const auto& [al, a, b, c, t, beta, gamma, q] = p;
    const double qv = q.value();
    if (a == QComplex{0.0, 0.0} || b == QComplex{0.0, 0.0} || c == QComplex{0.0, 0.0} || t == QComplex{0.0, 0.0})
        throw domain_error("substituted Rogers sum needs a, b, c, t != 0");
    const QComplex x = qv * al / (a * a * b * c);
    const std::vector<QComplex> upper{al, a * b, a * c, 1.0 / t};
    const std::vector<QComplex> lower{qv, qv * al / (a * b), qv * al / (a * c), al * t * qv};
    auto inner = [&](int n, double tgt, double floor) {
        if (n == 0)
            return exact({1.0, 0.0});
        auto make = [&]<class Real>(const Real& qr, std::vector<detail::cplx<Real>>& up, std::vector<detail::cplx<Real>>& lo) {
            const auto A = detail::lift<Real>(al), a_ = detail::lift<Real>(a), b_ = detail::lift<Real>(b), c_ = detail::lift<Real>(c);
            const auto be = detail::lift<Real>(beta), ga = detail::lift<Real>(gamma);
            up = {A * detail::int_power(qr, n), be, ga};
            lo = {a_ * b_, a_ * c_, detail::cplx<Real>(qr, Real(0)) * A * be * ga / (a_ * a_ * b_ * c_)};
        };
        return detail::terminating_at_q(n, qv, make, tgt, floor);
    };
    return detail::heuristic_outer_sum(upper, lower, x * t, al, true, qv, inner, target);
}

/// (q alpha, q alpha t/ab, q alpha t/ac, X beta, X gamma, X beta gamma t; q)_inf
/// / (q alpha/ab, q alpha/ac, q alpha t, X beta t, X gamma t, X beta gamma; q)_inf, X = q alpha / a^2 bc.
inline EvalResult ext_rogers_sub_rhs(const ExtRogersSubParams& p)
{
    const auto& [al, a, b, c, t, beta, gamma, q] = p;
    const double qv = q.value();
    const QComplex x = qv * al / (a * a * b * c);
    return qpoch_multi({qv * al, qv * al * t / (a * b), qv * al * t / (a * c), x * beta, x * gamma,
                        x * beta * gamma * t},
                       q, infinity)
           / qpoch_multi({qv * al / (a * b), qv * al / (a * c), qv * al * t, x * beta * t, x * gamma * t,
                          x * beta * gamma},
                         q, infinity);
}

// ---------------------------------------------------------------------------
// General transformation with an arbitrary coefficient sequence

/// Coefficient sequence A_0, A_1, ... of the general transformation.
using Sequence = std::function<QComplex(int)>;

struct GeneralTransformParams {
    QComplex alpha, u, v;
    Base q;
};

/// (alpha q, alpha uv/q; q)_inf / (alpha u, alpha v; q)_inf sum_n A_n (q/u; q)_n (alpha u)^n.
inline EvalResult general_transform_lhs(const GeneralTransformParams& p, const Sequence& seq,
                                        double target = kOuterTarget)
{
    const auto& [al, u, v, q] = p;
    const double qv = q.value();
    if (u == QComplex{0.0, 0.0} || v == QComplex{0.0, 0.0})
        throw domain_error("general transformation needs u, v != 0");
    const EvalResult pref = qpoch_multi({al * qv, al * u * v / qv}, q, infinity)
                            / qpoch_multi({al * u, al * v}, q, infinity);
    QComplex base{1.0, 0.0};
    double qn = 1.0;
    auto term = [&](int n, double) {
        const QComplex t = base * seq(n);
        base *= (1.0 - qv / u * qn) * al * u;
        qn *= qv;
        return EvalResult{t, detail::product_rounding(t, 2 * n + 2), 1, false, false};
    };
    auto tail = [](int) { return std::numeric_limits<double>::infinity(); };
    return pref * detail::outer_sum(term, tail, target);
}

/// sum_n (1 - alpha q^{2n})(alpha, q/u, q/v; q)_n (-alpha uv/q)^n q^{C(n,2)} / ((1 - alpha)(q, alpha u, alpha v; q)_n)
///       sum_{k<=n} (q^{-n}, alpha q^n; q)_k (q^2/v)^k / (q/v; q)_k A_k.
inline EvalResult general_transform_rhs(const GeneralTransformParams& p, const Sequence& seq,
                                        double target = kOuterTarget)
{
    const auto& [al, u, v, q] = p;
    const double qv = q.value();
    if (u == QComplex{0.0, 0.0} || v == QComplex{0.0, 0.0})
        throw domain_error("general transformation needs u, v != 0");
    std::vector<QComplex> seq_values;
    const std::vector<QComplex> upper{al, qv / u, qv / v};
    const std::vector<QComplex> lower{qv, al * u, al * v};
    auto inner = [&](int n, double tgt, double floor) {
        while (static_cast<int>(seq_values.size()) <= n)
            seq_values.push_back(seq(static_cast<int>(seq_values.size())));
        auto fn = [&]<class Real>() {
            using C = detail::cplx<Real>;
            const Real qr(qv);
            const C one(Real(1), Real(0));
            const C A = detail::lift<Real>(al), V = detail::lift<Real>(v);
            const C qc(qr, Real(0));
            const C an = A * detail::int_power(qr, n);
            const Real q_neg_n = Real(1) / detail::int_power(qr, n);
            const C w = qc * qc / V, l = qc / V;
            C term = one;
            C sum = detail::lift<Real>(seq_values[0]);
            Real abs_sum = detail::modulus(sum), weighted = abs_sum;
            Real qk(1);
            for (int k = 0; k < n; ++k) {
                const C f = one - l * qk;
                if (detail::is_zero(f))
                    throw domain_error("q/v equals q^-" + std::to_string(k) + " in the inner sum");
                term *= (one - C(q_neg_n * qk, Real(0))) * (one - an * qk) * w / f;
                const C t = term * detail::lift<Real>(seq_values[k + 1]);
                sum += t;
                const Real m = detail::modulus(t);
                abs_sum += m;
                weighted += Real(k + 2) * m;
                qk *= qr;
            }
            const Real err = detail::epsilon_of<Real>() * (Real(12) * weighted + Real(n + 1) * abs_sum);
            return detail::PartialSum<Real>{sum, err, abs_sum, n + 1};
        };
        return with_adaptive_precision(fn, tgt, floor);
    };
    // the q^{C(n,2)} factor rides on the ratio: zc_n = (-alpha uv/q) q^n
    QComplex base{1.0, 0.0};
    double qn = 1.0;
    const QComplex zc = -al * u * v / qv;
    if (std::abs(1.0 - al) < 1e-14)
        throw domain_error("general transformation needs alpha != 1");
    auto term = [&](int n, double scale) {
        const QComplex coef = base * (1.0 - al * qn * qn) / (1.0 - al);
        base *= zc * qn * detail::poch_step(upper, lower, qn);
        qn *= qv;
        if (coef == QComplex{0.0, 0.0})
            return exact({0.0, 0.0});
        const double cm = std::abs(coef);
        const EvalResult in = inner(n, target, scale / cm);
        EvalResult r;
        r.value = coef * in.value;
        r.err_estimate = cm * in.err_estimate + detail::product_rounding(r.value, 4 * n + 8);
        return r;
    };
    auto tail = [](int) { return std::numeric_limits<double>::infinity(); };
    return detail::outer_sum(term, tail, target);
}

/// Parameters of the 4phi3 specialization of the general transformation.
struct Phi43TransformParams {
    QComplex alpha, u, v, z, beta, delta, s, t, h;
    Base q;
};

/// (alpha q, alpha uv/q; q)_inf / (alpha u, alpha v; q)_inf 4phi3(q/u, q/v, beta, delta; s, t, h; q, alpha uvz/q).
inline EvalResult phi43_transform_lhs(const Phi43TransformParams& p, double target = 1e-15)
{
    const auto& [al, u, v, z, beta, delta, s, t, h, q] = p;
    const double qv = q.value();
    if (u == QComplex{0.0, 0.0} || v == QComplex{0.0, 0.0})
        throw domain_error("transformation needs u, v != 0");
    const EvalResult pref = qpoch_multi({al * qv, al * u * v / qv}, q, infinity)
                            / qpoch_multi({al * u, al * v}, q, infinity);
    return pref * phi_eval(SeriesSpec({qv / u, qv / v, beta, delta}, {s, t, h}, q, al * u * v * z / qv), target);
}

/// sum_n (1 - alpha q^{2n})(alpha, q/u, q/v; q)_n (-alpha uv/q)^n q^{C(n,2)} / ((1 - alpha)(q, alpha u, alpha v; q)_n)
///       4phi3(q^{-n}, alpha q^n, beta, delta; s, t, h; q, qz).
inline EvalResult phi43_transform_rhs(const Phi43TransformParams& p, double target = kOuterTarget)
{
    const auto& [al, u, v, z, beta, delta, s, t, h, q] = p;
    const double qv = q.value();
    if (u == QComplex{0.0, 0.0} || v == QComplex{0.0, 0.0})
        throw domain_error("transformation needs u, v != 0");
    return detail::rescaled_outer_sum({al, qv / u, qv / v}, {al * u, al * v}, -al * u * v / qv, beta, delta,
                                      {s, t, h}, z, q, target);
}

} // namespace qseries
