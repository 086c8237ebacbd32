#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

#include <boost/multiprecision/mpfr.hpp>

#include "qseries/detail/generic.hpp"
#include "qseries/types.hpp"

namespace qseries {

/// Fixed-precision MPFR real with `Digits` decimal digits. Fixed precision keeps
/// the type free of the global default-precision state, so it is safe to use
/// from several threads at once.
template <unsigned Digits>
using mp_real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<Digits>,
                                              boost::multiprecision::et_off>;

namespace detail {

using precision_tiers = std::tuple<double, mp_real<32>, mp_real<64>, mp_real<128>, mp_real<256>,
                                   mp_real<512>, mp_real<1024>, mp_real<2048>>;

template <class Real>
constexpr double decimal_digits()
{
    return std::numeric_limits<Real>::digits10;
}

struct AdaptiveState {
    EvalResult best;
    bool have_result = false;
    bool done = false;
    double needed_digits = 0.0;
};

template <class Real, bool Last, class Fn>
void run_tier(const Fn& fn, double rel_target, double abs_floor, AdaptiveState& st)
{
    if (st.done)
        return;
    constexpr double digits = decimal_digits<Real>();
    if constexpr (!Last) {
        if (st.have_result && digits < st.needed_digits)
            return;
    }

    const PartialSum<Real> part = fn.template operator()<Real>();
    EvalResult r;
    r.value = to_qcomplex(part.value);
    r.err_estimate = static_cast<double>(part.err) + kEps * std::abs(r.value);
    if (!std::isfinite(r.value.real()) || !std::isfinite(r.value.imag()) || !std::isfinite(r.err_estimate)) {
        // Out of double range (the value itself, or its error bound once the
        // terms are huge); a wider tier may still cope.
        if constexpr (!Last)
            return;
        throw overflow_error("terminating sum overflowed");
    }
    r.terms_used = part.terms;
    r.terminated = true;
    st.best = r;
    st.have_result = true;

    const double mag = std::abs(r.value);
    const double scale = std::max(mag, abs_floor);
    if (r.err_estimate <= rel_target * scale) {
        st.done = true;
        return;
    }
    // Digits still missing, judged from the value if it has any correct
    // digits, else from the caller's floor.
    double reference = abs_floor;
    if (r.err_estimate < 0.5 * mag)
        reference = std::max(reference, mag);
    if (reference > 0.0) {
        // in logs: the quotient itself can overflow
        const double deficit = std::log10(r.err_estimate) - std::log10(rel_target) - std::log10(reference);
        st.needed_digits = digits + deficit + 2.0;
    } else {
        st.needed_digits = 2.0 * digits;
    }
}

template <class Fn, std::size_t... I>
EvalResult run_tiers(const Fn& fn, double rel_target, double abs_floor, std::index_sequence<I...>)
{
    AdaptiveState st;
    constexpr std::size_t last = sizeof...(I) - 1;
    (run_tier<std::tuple_element_t<I, precision_tiers>, I == last>(fn, rel_target, abs_floor, st), ...);
    return st.best;
}

} // namespace detail

/// Evaluates a finite sum at increasing working precision until its rounding
/// bound is at most rel_target * max(|value|, abs_floor).
///
/// `fn` is a generic callable: `fn.template operator()<Real>()` must build all of
/// its inputs in `Real` from exact double data and return a
/// detail::PartialSum<Real>. Parameters that are derived from the caller's data
/// (products, powers of q, e^{i theta}) have to be formed in `Real` as well,
/// otherwise their double rounding is amplified by the same cancellation the
/// extra precision is meant to absorb.
///
/// When even the widest tier misses the target the last result is returned with
/// its (large) error estimate.
template <class Fn>
EvalResult with_adaptive_precision(const Fn& fn, double rel_target, double abs_floor = 0.0)
{
    return detail::run_tiers(
        fn, rel_target, abs_floor,
        std::make_index_sequence<std::tuple_size_v<detail::precision_tiers>>{});
}

} // namespace qseries
