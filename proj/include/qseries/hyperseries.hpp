#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qseries/detail/generic.hpp"
#include "qseries/errors.hpp"
#include "qseries/precision.hpp"
#include "qseries/qcore.hpp"
#include "qseries/types.hpp"

namespace qseries {

inline constexpr int kTermBudget = 100000;
inline constexpr int kMaxTerminatingDegree = 10000;
inline constexpr double kTerminationTolerance = 1e-12;
/// Terms scanned before an uncertified tail falls back to a heuristic estimate.
inline constexpr int kRatioScanTerms = 50;
inline constexpr double kDefaultSeriesTarget = 1e-15;

/// r+1 phi r (numerator; denominator; q, argument).
struct SeriesSpec {
    std::vector<QComplex> numerator;
    std::vector<QComplex> denominator;
    Base q;
    QComplex argument;

    SeriesSpec(std::vector<QComplex> num, std::vector<QComplex> den, Base base, QComplex z)
        : numerator(std::move(num)), denominator(std::move(den)), q(base), argument(z)
    {
        if (numerator.size() != denominator.size() + 1)
            throw domain_error("series needs one more numerator than denominator parameter (got "
                               + std::to_string(numerator.size()) + " and "
                               + std::to_string(denominator.size()) + ")");
    }
};

/// r+1 W r (a1; tail; q, argument), the very-well-poised series.
struct VWPSpec {
    QComplex a1;
    std::vector<QComplex> tail;
    Base q;
    QComplex argument;

    /// The equivalent SeriesSpec: numerators a1, q sqrt(a1), -q sqrt(a1), tail...;
    /// denominators sqrt(a1), -sqrt(a1), q a1 / tail...
    SeriesSpec expand() const
    {
        if (a1 == QComplex{0.0, 0.0})
            throw domain_error("very-well-poised series needs a1 != 0");
        const QComplex s = std::sqrt(a1);
        const double qv = q.value();
        std::vector<QComplex> num{a1, qv * s, -qv * s};
        std::vector<QComplex> den{s, -s};
        for (const auto& x : tail) {
            if (x == QComplex{0.0, 0.0})
                throw domain_error("very-well-poised tail parameter 0 has no partner q a1 / 0");
            num.push_back(x);
            den.push_back(qv * a1 / x);
        }
        return SeriesSpec(std::move(num), std::move(den), q, argument);
    }
};

/// Index n with u = q^{-n} (to relative kTerminationTolerance), if any.
inline std::optional<int> terminating_degree(QComplex u, double q)
{
    const double m = std::abs(u);
    if (m < 1.0 - kTerminationTolerance)
        return std::nullopt;
    const long n = std::lround(-std::log(m) / std::log(q));
    if (n < 0 || n > kMaxTerminatingDegree)
        return std::nullopt;
    const double target = std::pow(q, -static_cast<double>(n));
    if (!std::isfinite(target))
        return std::nullopt;
    if (std::abs(u - target) <= kTerminationTolerance * target)
        return static_cast<int>(n);
    return std::nullopt;
}

/// Smallest terminating degree among the numerator parameters and its position.
inline std::optional<std::pair<std::size_t, int>> find_termination(const SeriesSpec& spec)
{
    std::optional<std::pair<std::size_t, int>> best;
    for (std::size_t i = 0; i < spec.numerator.size(); ++i) {
        if (auto n = terminating_degree(spec.numerator[i], spec.q.value()))
            if (!best || *n < best->second)
                best = std::pair{i, *n};
    }
    return best;
}

namespace detail {

/// Term recursion shared by the phi and very-well-poised evaluators:
///   t_{k+1} / t_k = z prod(1 - u q^k) / ((1 - q^{k+1}) prod(1 - l q^k)),
/// and for very-well-poised kernels each term is additionally weighted by
/// (1 - a1 q^{2k}) / (1 - a1).
struct SeriesKernel {
    std::vector<QComplex> upper;
    std::vector<QComplex> lower;
    double q;
    QComplex z;
    bool vwp = false;
    QComplex a1{0.0, 0.0};

    QComplex ratio(int k, double qk) const
    {
        QComplex num = z;
        QComplex den = 1.0 - q * qk;
        for (const auto& u : upper)
            num *= 1.0 - u * qk;
        for (const auto& l : lower) {
            const QComplex f = 1.0 - l * qk;
            if (std::abs(f) <= 1e-14)
                throw domain_error("denominator parameter equals q^-" + std::to_string(k)
                                   + " before the series terminates");
            den *= f;
        }
        return num / den;
    }

    /// Upper bound on |t_{m+1}/t_m| valid for every m >= k, or +inf when the
    /// monotone majorant is not yet available at k.
    double ratio_bound(double qk) const
    {
        double num = std::abs(z);
        double den = 1.0 - q * qk;
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

    QComplex weight(double q2k) const { return vwp ? (1.0 - a1 * q2k) / (1.0 - a1) : QComplex{1.0, 0.0}; }

    /// sup over m >= k of |weight(m)|.
    double weight_bound(double q2k) const
    {
        return vwp ? (1.0 + std::abs(a1) * q2k) / std::abs(1.0 - a1) : 1.0;
    }

    int parameter_count() const { return static_cast<int>(upper.size() + lower.size()) + (vwp ? 2 : 0); }
};

inline bool vwp_singular(const SeriesKernel& kern)
{
    return kern.vwp && kern.a1 == QComplex{1.0, 0.0};
}

/// Sums a kernel either through degree `stop_at` (terminating case, double
/// precision) or until the certified tail falls below target * |sum|.
inline EvalResult sum_kernel(const SeriesKernel& kern, double target, std::optional<int> stop_at)
{
    if (vwp_singular(kern))
        throw domain_error("very-well-poised series needs a1 != 1");
    QComplex base{1.0, 0.0}; // term without the very-well-poised weight
    QComplex sum{0.0, 0.0};
    double abs_sum = 0.0;
    double weighted = 0.0;
    double qk = 1.0;
    int small_run = 0;
    EvalResult r;
    for (int k = 0;; ++k) {
        if (k >= kTermBudget)
            throw convergence_error("series did not reach its accuracy target within "
                                    + std::to_string(kTermBudget) + " terms");
        const QComplex term = base * kern.weight(qk * qk);
        sum += term;
        const double mag = std::abs(term);
        abs_sum += mag;
        weighted += (k + 1) * mag;
        if (!std::isfinite(sum.real()) || !std::isfinite(sum.imag()))
            throw overflow_error("series partial sum overflowed at term " + std::to_string(k));
        const double rounding = kEps * ((2.0 * kern.parameter_count() + 6.0) * weighted + abs_sum);

        if (stop_at && k == *stop_at) {
            r.value = sum;
            r.err_estimate = rounding;
            r.terms_used = k + 1;
            r.terminated = true;
            return r;
        }
        base *= kern.ratio(k, qk);
        qk *= kern.q;
        if (stop_at)
            continue;

        const double next = std::abs(base);
        const double threshold = target * (std::abs(sum) > 0.0 ? std::abs(sum) : 1.0);
        const double rho = kern.ratio_bound(qk);
        if (rho < 1.0) {
            const double tail = next * kern.weight_bound(qk * qk) / (1.0 - rho);
            if (next <= threshold && tail <= threshold) {
                r.value = sum;
                r.err_estimate = tail + rounding;
                r.terms_used = k + 1;
                return r;
            }
        } else if (k + 1 >= kRatioScanTerms) {
            // No certified majorant: accept after three consecutive negligible terms.
            small_run = next * kern.weight_bound(qk * qk) <= threshold ? small_run + 1 : 0;
            if (small_run >= 3) {
                r.value = sum;
                r.err_estimate = 10.0 * next * kern.weight_bound(qk * qk) + rounding;
                r.terms_used = k + 1;
                r.heuristic = true;
                return r;
            }
        }
        if (base == QComplex{0.0, 0.0}) {
            r.value = sum;
            r.err_estimate = rounding;
            r.terms_used = k + 1;
            r.terminated = true;
            return r;
        }
    }
}

/// Terminating r+1 phi r through the scalar-generic kernel at adaptive precision.
/// `upper` excludes the q^{-n} parameter.
inline EvalResult terminating_phi(int n, const std::vector<QComplex>& upper,
                                  const std::vector<QComplex>& lower, double q, QComplex z,
                                  double target, double abs_floor = 0.0)
{
    auto fn = [&]<class Real>() {
        std::vector<cplx<Real>> up, lo;
        for (const auto& u : upper)
            up.push_back(lift<Real>(u));
        for (const auto& l : lower)
            lo.push_back(lift<Real>(l));
        return terminating_sum<Real>(n, std::span<const cplx<Real>>(up), std::span<const cplx<Real>>(lo),
                                     Real(q), lift<Real>(z));
    };
    return with_adaptive_precision(fn, target, abs_floor);
}

} // namespace detail

/// Evaluates spec. A numerator parameter within kTerminationTolerance of q^{-n}
/// makes the series terminating; it is then summed exactly through degree n
/// (with q^{-n} taken as exact) at whatever working precision the cancellation
/// between terms requires. Otherwise |argument| < 1 is required and terms are
/// added until both the next term and a geometric tail bound drop below
/// target_accuracy relative to the sum.
inline EvalResult phi_eval(const SeriesSpec& spec, double target_accuracy = kDefaultSeriesTarget)
{
    if (!(target_accuracy > 0.0))
        throw domain_error("target accuracy must be positive");
    const double q = spec.q.value();
    if (auto term = find_termination(spec)) {
        std::vector<QComplex> upper;
        for (std::size_t i = 0; i < spec.numerator.size(); ++i)
            if (i != term->first)
                upper.push_back(spec.numerator[i]);
        return detail::terminating_phi(term->second, upper, spec.denominator, q, spec.argument,
                                       target_accuracy);
    }
    if (!(std::abs(spec.argument) < 1.0))
        throw domain_error("non-terminating series diverges: |argument| = "
                           + std::to_string(std::abs(spec.argument)) + " >= 1");
    detail::SeriesKernel kern{spec.numerator, spec.denominator, q, spec.argument};
    return detail::sum_kernel(kern, target_accuracy, std::nullopt);
}

/// Very-well-poised series via its expansion into an r+1 phi r.
inline EvalResult vwp_eval(const VWPSpec& spec, double target_accuracy = kDefaultSeriesTarget)
{
    return phi_eval(spec.expand(), target_accuracy);
}

/// Very-well-poised sum written with the weight (1 - a1 q^{2k})/(1 - a1):
///   sum_k (1 - a1 q^{2k})/(1 - a1) (a1, tail; q)_k / (q, partners; q)_k z^k,
/// where partners[i] stands for q a1 / tail[i]. Passing the partners
/// explicitly keeps the a1 -> 0 limit (partners finite, tail entries -> 0)
/// and avoids rounding in q a1 / tail[i].
inline EvalResult vwp_terms(QComplex a1, const std::vector<QComplex>& tail,
                            const std::vector<QComplex>& partners, Base q, QComplex z,
                            double target_accuracy = kDefaultSeriesTarget)
{
    if (tail.size() != partners.size())
        throw domain_error("very-well-poised term form needs one partner per tail parameter");
    detail::SeriesKernel kern;
    kern.upper.push_back(a1);
    kern.upper.insert(kern.upper.end(), tail.begin(), tail.end());
    kern.lower = partners;
    kern.q = q.value();
    kern.z = z;
    kern.vwp = true;
    kern.a1 = a1;

    std::optional<int> stop;
    for (const auto& u : kern.upper)
        if (auto n = terminating_degree(u, q.value()))
            stop = stop ? std::min(*stop, *n) : *n;
    if (!stop && !(std::abs(z) < 1.0))
        throw domain_error("non-terminating very-well-poised series diverges: |argument| >= 1");
    return detail::sum_kernel(kern, target_accuracy, stop);
}

/// Term form of spec with partners q a1 / tail[i].
inline EvalResult vwp_terms(const VWPSpec& spec, double target_accuracy = kDefaultSeriesTarget)
{
    if (spec.a1 == QComplex{0.0, 0.0})
        throw domain_error("very-well-poised series needs a1 != 0");
    std::vector<QComplex> partners;
    for (const auto& x : spec.tail) {
        if (x == QComplex{0.0, 0.0})
            throw domain_error("very-well-poised tail parameter 0 has no partner q a1 / 0");
        partners.push_back(spec.q.value() * spec.a1 / x);
    }
    return vwp_terms(spec.a1, spec.tail, partners, spec.q, spec.argument, target_accuracy);
}

/// rho < 1 bounding |t_{m+1}/t_m| for every m >= from_index.
inline double term_ratio_bound(const SeriesSpec& spec, int from_index)
{
    if (find_termination(spec))
        throw domain_error("term ratio bound is defined for non-terminating series only");
    if (from_index < 0)
        throw domain_error("term ratio bound needs from_index >= 0");
    detail::SeriesKernel kern{spec.numerator, spec.denominator, spec.q.value(), spec.argument};
    const double qk = std::pow(spec.q.value(), from_index);
    const double rho = kern.ratio_bound(qk);
    if (!(rho < 1.0))
        throw convergence_error("no term ratio bound below 1 from index " + std::to_string(from_index));
    return rho;
}

/// Uniform-in-n bound on q^{C(n,2)} |r+1 phi r(q^{-n}, a1 q^n, a_2..a_r; b_1..b_r; q, q x)|
/// for |x| <= lambda:
///   (-|a1| lambda, -q, -|a_2|, ..., -|a_r|; q)_inf / (lambda, |b_1|, ..., |b_r|; q)_inf.
/// With no a parameters at all (r = 0) the a1 factor is absent.
inline double prop32_bound(std::optional<QComplex> a1, std::span<const QComplex> others,
                           std::span<const QComplex> bs, Base q, double lambda)
{
    if (!(lambda > 0.0 && lambda < 1.0))
        throw domain_error("bound needs 0 < lambda < 1");
    for (const auto& b : bs)
        if (!(std::abs(b) < 1.0))
            throw domain_error("bound needs every denominator parameter of modulus < 1");
    const double qv = q.value();
    double num = qpoch(-qv, q, infinity).real();
    if (a1)
        num *= qpoch(-std::abs(*a1) * lambda, q, infinity).real();
    for (const auto& a : others)
        num *= qpoch(-std::abs(a), q, infinity).real();
    double den = qpoch(lambda, q, infinity).real();
    for (const auto& b : bs)
        den *= qpoch(std::abs(b), q, infinity).real();
    return num / den;
}

/// prop32_bound for a terminating spec (q^{-n}, a1 q^n, a_2, ..., a_r; b_1..b_r; q, q x).
inline double prop32_bound(const SeriesSpec& spec, double lambda)
{
    const auto term = find_termination(spec);
    if (!term || term->first != 0)
        throw domain_error("bound needs a terminating series with q^-n as first numerator parameter");
    const double qv = spec.q.value();
    if (std::abs(spec.argument) / qv > lambda * (1.0 + 1e-12))
        throw domain_error("bound needs |argument / q| <= lambda");
    std::optional<QComplex> a1;
    std::vector<QComplex> others;
    if (spec.numerator.size() > 1) {
        a1 = spec.numerator[1] / std::pow(qv, term->second);
        others.assign(spec.numerator.begin() + 2, spec.numerator.end());
    }
    return prop32_bound(a1, others, spec.denominator, spec.q, lambda);
}

/// Parameters of the kernel
///   A_k(theta) = h(cos 2theta; 1) h(cos theta; w) (t e^{i theta}, t e^{-i theta}; q)_k
///                / h(cos theta; a, b, c, d, u).
struct BoundedKernelParams {
    QComplex a, b, c, d, u, w, t;
    Base q;
};

inline QComplex bounded_kernel(double theta, int k, const BoundedKernelParams& p)
{
    if (detail::max_modulus({p.a, p.b, p.c, p.d, p.u}) >= 1.0)
        throw domain_error("kernel needs max(|a|,|b|,|c|,|d|,|u|) < 1");
    const double qv = p.q.value();
    const QComplex e{std::cos(theta), std::sin(theta)};
    const EvalResult num = detail::h_theta(2.0 * theta, {1.0, 0.0}, qv) * detail::h_theta(theta, p.w, qv)
                           * qpoch(p.t * e, p.q, k) * qpoch(p.t * std::conj(e), p.q, k);
    const QComplex den[] = {p.a, p.b, p.c, p.d, p.u};
    const EvalResult h = detail::h_theta_multi(theta, den, qv);
    return (num / h).value;
}

/// theta- and k-independent majorant of |A_k(theta)|:
///   (-1, -1, -|w|, -|w|, -|t|, -|t|; q)_inf / prod_{x in a,b,c,d,u} (|x|, |x|; q)_inf.
inline double bounded_kernel_majorant(const BoundedKernelParams& p)
{
    if (detail::max_modulus({p.a, p.b, p.c, p.d, p.u}) >= 1.0)
        throw domain_error("kernel needs max(|a|,|b|,|c|,|d|,|u|) < 1");
    auto minus = [&](QComplex x) { return qpoch(-std::abs(x), p.q, infinity).real(); };
    auto plus = [&](QComplex x) { return qpoch(std::abs(x), p.q, infinity).real(); };
    double num = minus(1.0) * minus(1.0) * minus(p.w) * minus(p.w) * minus(p.t) * minus(p.t);
    double den = 1.0;
    for (const auto& x : {p.a, p.b, p.c, p.d, p.u})
        den *= plus(x) * plus(x);
    return num / den;
}

} // namespace qseries
