#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "qseries/errors.hpp"
#include "qseries/hyperseries.hpp"
#include "qseries/point.hpp"
#include "qseries/qcore.hpp"
#include "qseries/types.hpp"

namespace qseries {

inline constexpr int kQuadStartNodes = 64;
inline constexpr int kQuadNodeBudget = 1 << 18;

enum class Smoothness {
    /// Even, 2pi-periodic and analytic in theta: the trapezoid rule converges geometrically.
    analytic_periodic,
    /// Anything else; the rule still runs but convergence may be slow.
    other,
};

/// theta -> f(theta) on [0, pi]. The callable must be safe to invoke
/// concurrently when integrate() is asked to use several threads.
struct Integrand {
    std::function<QComplex(double)> f;
    Smoothness smoothness = Smoothness::analytic_periodic;
    /// Points in [0, pi] where f is known to be singular; expected empty.
    std::vector<double> singularities;
};

struct QuadResult {
    QComplex value{0.0, 0.0};
    double err_estimate = 0.0;
    int nodes_used = 0;
    bool converged = false;
};

namespace detail {

inline void sample(const Integrand& f, const std::vector<double>& thetas, std::vector<QComplex>& out, int threads)
{
    out.resize(thetas.size());
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            out[i] = f.f(thetas[i]);
    };
    const std::size_t n = thetas.size();
    if (threads <= 1 || n < 64) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (std::size_t lo = 0; lo < n; lo += chunk)
            pool.emplace_back(work, lo, std::min(n, lo + chunk));
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag()))
            throw domain_error("integrand is not finite at theta = " + std::to_string(thetas[i]));
}

} // namespace detail

/// Closed trapezoid rule on [0, pi] with endpoint weights 1/2, which for an
/// even 2pi-periodic integrand is the periodic trapezoid rule. Starts at
/// kQuadStartNodes intervals and doubles, reusing earlier nodes, until two
/// successive estimates differ by at most target * max(|I|, int |f|).
/// The scale int |f| keeps the test meaningful for integrals that vanish.
inline QuadResult integrate(const Integrand& f, double target = 1e-12, int threads = 1)
{
    if (!f.f)
        throw domain_error("integrand has no callable");
    if (!f.singularities.empty())
        throw domain_error("integrand declares singular points; the trapezoid rule needs a smooth integrand");
    if (!(target > 0.0))
        throw domain_error("quadrature target must be positive");

    int intervals = kQuadStartNodes;
    std::vector<double> thetas;
    for (int j = 0; j <= intervals; ++j)
        thetas.push_back(pi * j / intervals);
    std::vector<QComplex> vals;
    detail::sample(f, thetas, vals, threads);

    QComplex sum = 0.5 * (vals.front() + vals.back());
    double abs_sum = 0.5 * (std::abs(vals.front()) + std::abs(vals.back()));
    for (int j = 1; j < intervals; ++j) {
        sum += vals[j];
        abs_sum += std::abs(vals[j]);
    }
    QComplex estimate = sum * (pi / intervals);
    int nodes = intervals + 1;

    while (true) {
        if (2 * intervals > kQuadNodeBudget) {
            throw convergence_error("quadrature did not converge within " + std::to_string(kQuadNodeBudget)
                                    + " nodes");
        }
        const int next = 2 * intervals;
        thetas.clear();
        for (int j = 1; j < next; j += 2)
            thetas.push_back(pi * j / next);
        detail::sample(f, thetas, vals, threads);
        for (const auto& v : vals) {
            sum += v;
            abs_sum += std::abs(v);
        }
        nodes += static_cast<int>(vals.size());
        intervals = next;
        const QComplex refined = sum * (pi / intervals);
        const double delta = std::abs(refined - estimate);
        const double scale = std::max(std::abs(refined), abs_sum * (pi / intervals));
        estimate = refined;
        if (delta <= target * scale) {
            QuadResult r;
            r.value = estimate;
            r.err_estimate = delta + 4.0 * detail::kEps * scale;
            r.nodes_used = nodes;
            r.converged = true;
            return r;
        }
    }
}

/// h(cos 2theta; 1) h(cos theta; d) / h(cos theta; a, b, c, u, v).
inline QComplex nr_integrand(double theta, QComplex a, QComplex b, QComplex c, QComplex u, QComplex v,
                             QComplex d, Base q)
{
    if (detail::max_modulus({a, b, c, u, v}) >= 1.0)
        throw domain_error("Nassrallah-Rahman integrand requires max(|a|,|b|,|c|,|u|,|v|) < 1");
    const double qv = q.value();
    const std::array<QComplex, 5> den{a, b, c, u, v};
    return (detail::h_theta(2.0 * theta, 1.0, qv) * detail::h_theta(theta, d, qv)
            / detail::h_theta_multi(theta, den, qv))
        .value;
}

/// Weight h(cos 2theta; 1)/h(cos theta; a, b, c, d, r) times
/// 4phi3(a e^{i theta}, a e^{-i theta}, beta, delta; s, t, h; q, bcdrz).
/// Reads slots a, b, c, d, r, s, t, h, z, beta, delta.
inline QComplex thm18_integrand(double theta, const ParameterPoint& p)
{
    const QComplex a = p[Slot::a], b = p[Slot::b], c = p[Slot::c], d = p[Slot::d], r = p[Slot::r];
    const QComplex s = p[Slot::s], t = p[Slot::t], h = p[Slot::h], z = p[Slot::z];
    if (detail::max_modulus({a, b, c, d, r, s, t, h}) >= 1.0 || std::abs(z) > 1.0)
        throw domain_error("twelve-parameter integrand requires max(|a|,...,|h|) < 1 and |z| <= 1");
    const double qv = p.q().value();
    const std::array<QComplex, 5> den{a, b, c, d, r};
    const EvalResult w = detail::h_theta(2.0 * theta, 1.0, qv) / detail::h_theta_multi(theta, den, qv);
    const QComplex e{std::cos(theta), std::sin(theta)};
    const EvalResult f = phi_eval(SeriesSpec({a * e, a * std::conj(e), p[Slot::beta], p[Slot::delta]}, {s, t, h},
                                             p.q(), b * c * d * r * z),
                                  1e-15);
    return w.value * f.value;
}

} // namespace qseries
