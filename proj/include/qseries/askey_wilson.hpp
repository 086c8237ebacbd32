#pragma once

#include <array>
#include <cmath>
#include <string>

#include "qseries/detail/generic.hpp"
#include "qseries/errors.hpp"
#include "qseries/precision.hpp"
#include "qseries/qcore.hpp"
#include "qseries/types.hpp"

namespace qseries {

/// Largest degree accepted by aw_poly.
inline constexpr int kMaxAWDegree = 64;

struct AWParams {
    QComplex a, b, c, d;
    Base q;

    bool real() const { return a.imag() == 0 && b.imag() == 0 && c.imag() == 0 && d.imag() == 0; }

    void require_polydisc() const
    {
        if (detail::max_modulus({a, b, c, d}) >= 1.0)
            throw domain_error("Askey-Wilson weight requires max(|a|,|b|,|c|,|d|) < 1");
    }
};

namespace detail {

template <class Real>
PartialSum<Real> aw_poly_sum(int n, double x, const AWParams& p)
{
    using std::sqrt;
    using C = cplx<Real>;
    const Real q(p.q.value());
    const C a = lift<Real>(p.a), b = lift<Real>(p.b), c = lift<Real>(p.c), d = lift<Real>(p.d);
    const Real xr(x);
    Real y2 = Real(1) - xr * xr;
    if (y2 < 0)
        y2 = 0;
    const Real y = sqrt(y2);
    const C e(xr, y), e_inv(xr, -y);
    const std::array<C, 3> lower{a * b, a * c, a * d};
    const std::array<C, 3> upper{a * b * c * d * (int_power(q, n) / q), a * e_inv, a * e};
    PartialSum<Real> s = terminating_sum<Real>(n, upper, lower, q, C(q, Real(0)));
    const C pref = qpoch_finite<Real>(std::span<const C>(lower), q, n) * int_power(C(Real(1), Real(0)) / a, n);
    const Real m = modulus(pref);
    return {pref * s.value, m * s.err, m * s.abs_sum, s.terms};
}

/// p_n(x) without the public degree cap; abs_floor as in with_adaptive_precision.
inline EvalResult aw_poly_unbounded(int n, double x, const AWParams& p, double target, double abs_floor)
{
    if (n < 0)
        throw domain_error("Askey-Wilson polynomial degree must be >= 0");
    if (!(std::abs(x) <= 1.0))
        throw domain_error("Askey-Wilson polynomial needs |x| <= 1");
    if (p.a == QComplex{0.0, 0.0})
        throw domain_error("Askey-Wilson polynomial in the 4phi3 form needs a != 0");
    if (n == 0)
        return exact({1.0, 0.0});
    auto fn = [&]<class Real>() { return aw_poly_sum<Real>(n, x, p); };
    EvalResult r = with_adaptive_precision(fn, target, abs_floor);
    if (p.real()) {
        const double im = std::abs(r.value.imag());
        if (im > 1e-10 * std::abs(r.value) + 2.0 * r.err_estimate + 1e-300)
            throw consistency_error("Askey-Wilson polynomial with real parameters has a complex value");
        r.value = {r.value.real(), 0.0};
    }
    return r;
}

} // namespace detail

/// p_n(x; a, b, c, d | q) = (ab, ac, ad; q)_n a^{-n}
///     4phi3(q^{-n}, abcd q^{n-1}, a e^{-i theta}, a e^{i theta}; ab, ac, ad; q, q),
/// x = cos theta. The terminating sum cancels heavily for larger n, so it is
/// run at whatever precision brings the rounding bound under
/// target * max(|p_n(x)|, abs_floor).
inline EvalResult aw_poly(int n, double x, const AWParams& p, double target = 1e-14, double abs_floor = 0.0)
{
    if (n > kMaxAWDegree)
        throw domain_error("Askey-Wilson polynomial degree " + std::to_string(n) + " exceeds the cap "
                           + std::to_string(kMaxAWDegree));
    return detail::aw_poly_unbounded(n, x, p, target, abs_floor);
}

/// W(cos theta) = h(cos 2theta; 1) / h(cos theta; a, b, c, d).
inline EvalResult aw_weight(double theta, const AWParams& p)
{
    p.require_polydisc();
    const double q = p.q.value();
    const std::array<QComplex, 4> ps{p.a, p.b, p.c, p.d};
    return detail::h_theta(2.0 * theta, {1.0, 0.0}, q) / detail::h_theta_multi(theta, ps, q);
}

/// Diagonal value of the orthogonality relation:
///   K (1 - abcd/q)(q, ab, ac, ad, bc, bd, cd; q)_n / ((1 - abcd q^{2n-1})(abcd/q; q)_n).
/// For n >= 1 the factor (1 - abcd/q)/(abcd/q; q)_n is taken as 1/(abcd; q)_{n-1}.
inline EvalResult aw_norm(int n, const AWParams& p)
{
    if (n < 0)
        throw domain_error("Askey-Wilson norm needs n >= 0");
    p.require_polydisc();
    const EvalResult k = aw_constant(p.a, p.b, p.c, p.d, p.q);
    if (n == 0)
        return k;
    const QComplex abcd = p.a * p.b * p.c * p.d;
    const double qv = p.q.value();
    const QComplex degenerate = 1.0 - abcd * std::pow(qv, 2 * n - 1);
    if (std::abs(degenerate) < 1e-14)
        throw domain_error("Askey-Wilson norm is singular: abcd q^{2n-1} = 1");
    const EvalResult num = qpoch_multi({QComplex(qv), p.a * p.b, p.a * p.c, p.a * p.d, p.b * p.c, p.b * p.d, p.c * p.d},
                                       p.q, n);
    const EvalResult den = qpoch(abcd, p.q, n - 1) * exact(degenerate);
    return k * (num / den);
}

/// Coefficient Delta_n(t) of p_n in the generating function.
struct DeltaSeq {
    AWParams params;
    QComplex t;
    int n;
};

/// Delta_n(t) = (1 - abcd q^{2n-1})(abcd/q, 1/t; q)_n (dt)^n
///              / ((1 - abcd/q)(q, ad, bd, cd, abcdt; q)_n).
/// (1/t; q)_n t^n is formed as prod (t - q^k), which is exact at t = 1 and
/// finite at t = 0.
inline EvalResult delta_seq(const DeltaSeq& ds)
{
    const auto& p = ds.params;
    const int n = ds.n;
    if (n < 0)
        throw domain_error("Delta_n needs n >= 0");
    if (n == 0)
        return exact({1.0, 0.0});
    const double qv = p.q.value();
    const QComplex abcd = p.a * p.b * p.c * p.d;
    QComplex t_part = 1.0;
    double qk = 1.0;
    for (int k = 0; k < n; ++k, qk *= qv)
        t_part *= ds.t - qk;
    const EvalResult num = qpoch(abcd, p.q, n - 1)
                           * exact((1.0 - abcd * std::pow(qv, 2 * n - 1)) * t_part * std::pow(p.d, n));
    const EvalResult den = qpoch_multi({QComplex(qv), p.a * p.d, p.b * p.d, p.c * p.d, abcd * ds.t}, p.q, n);
    if (den.magnitude() == 0.0)
        throw domain_error("Delta_n has a vanishing denominator factor");
    return num / den;
}

/// Points of the pointwise checks: 17 equispaced interior points of (0, pi).
inline constexpr int kThetaGridSize = 17;

inline std::array<double, kThetaGridSize> theta_grid()
{
    std::array<double, kThetaGridSize> g{};
    for (int j = 0; j < kThetaGridSize; ++j)
        g[j] = pi * (j + 1) / (kThetaGridSize + 1);
    return g;
}

enum class GenFuncForm { d_form, a_form };

/// Closed product side of the generating function. The d-form is
///   (abcd, adt, bdt, cdt; q)_inf h(cos theta; d) / ((abcdt, ad, bd, cd; q)_inf h(cos theta; dt)),
/// valid for |dt| < 1; the a-form interchanges a and d.
inline EvalResult gen_func_rhs(double theta, const AWParams& p, QComplex t, GenFuncForm form)
{
    QComplex a = p.a, d = p.d;
    if (form == GenFuncForm::a_form)
        std::swap(a, d);
    if (!(std::abs(d * t) < 1.0))
        throw domain_error(form == GenFuncForm::d_form ? "generating function requires |dt| < 1"
                                                       : "generating function requires |at| < 1");
    const QComplex b = p.b, c = p.c;
    const double qv = p.q.value();
    const QComplex abcd = a * b * c * d;
    const EvalResult num = qpoch_multi({abcd, a * d * t, b * d * t, c * d * t}, p.q, infinity)
                           * detail::h_theta(theta, d, qv);
    const EvalResult den = qpoch_multi({abcd * t, a * d, b * d, c * d}, p.q, infinity)
                           * detail::h_theta(theta, d * t, qv);
    if (den.magnitude() == 0.0)
        throw domain_error("generating function has a vanishing denominator product");
    return num / den;
}

/// Series side sum_n Delta_n(t) p_n(cos theta) (a-form: coefficients with a and
/// d interchanged, using the symmetry of p_n). Terms are added until three in a
/// row fall below target relative to the sum; the error estimate extrapolates
/// the last term geometrically and is flagged heuristic.
inline EvalResult gen_func_series(double theta, const AWParams& p, QComplex t, GenFuncForm form,
                                  double target = 1e-13, int max_terms = 400)
{
    AWParams coeff = p;
    if (form == GenFuncForm::a_form)
        std::swap(coeff.a, coeff.d);
    if (!(std::abs(coeff.d * t) < 1.0))
        throw domain_error(form == GenFuncForm::d_form ? "generating function requires |dt| < 1"
                                                       : "generating function requires |at| < 1");
    const double x = std::cos(theta);
    const double rho = std::abs(coeff.d * t);
    EvalResult sum = exact({0.0, 0.0});
    double err = 0.0;
    int small = 0;
    double last = 0.0;
    for (int n = 0; n < max_terms; ++n) {
        const EvalResult delta = delta_seq({coeff, t, n});
        if (delta.magnitude() == 0.0) {
            if (n > 0 && ++small >= 3)
                break;
            continue;
        }
        const double floor = std::max(sum.magnitude(), 1e-300) / delta.magnitude();
        const EvalResult pn = detail::aw_poly_unbounded(n, x, p, 1e-3 * target, floor);
        const EvalResult term = delta * pn;
        sum.value += term.value;
        err += term.err_estimate;
        sum.terms_used = n + 1;
        last = term.magnitude();
        small = last <= target * sum.magnitude() ? small + 1 : 0;
        if (small >= 3)
            break;
        if (n + 1 == max_terms)
            throw convergence_error("generating function series did not settle within "
                                    + std::to_string(max_terms) + " terms");
    }
    sum.err_estimate = err + last * rho / (1.0 - rho) + detail::kEps * sum.magnitude();
    sum.heuristic = true;
    return sum;
}

} // namespace qseries
